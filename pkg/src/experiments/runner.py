"""
Evaluation regimens, the hidden-unit sweep and the grid driver.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import (
    CV_FOLDS,
    DEFAULT_BATCH_SIZE,
    DEFAULT_EPOCHS,
    DEFAULT_LEARNING_RATE,
    HIDDEN_UNIT_CANDIDATES,
)
from src.domains.generators import generate_domain, generate_family_testset
from src.domains.models import Dataset, DomainSpec
from src.metrics.binary import evaluate
from src.metrics.models import METRIC_KEYS, MetricBundle
from src.nn.mlp import predict
from src.nn.models import MlpConfig
from src.nn.training import train
from .cache import CellCache
from .folds import stratified_folds
from .models import CandidateResult, ExperimentGrid, ExperimentResult, GridCell, Regimen
from .seeds import data_seed, fold_seed, model_seed, testset_seed

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def balanced_testset(family: str, level: int) -> Dataset:
    """The fixed balanced test set of a family at one complexity/overlap level"""
    return generate_family_testset(family, level, testset_seed(family, level))


def _fit_and_score(cfg: MlpConfig, train_ds: Dataset, test_ds: Dataset) -> MetricBundle:
    model, _ = train(cfg, train_ds)
    y_pred = predict(model, test_ds.features)
    return evaluate(test_ds.labels, y_pred, class_counts=train_ds.class_counts)


def _aggregate(bundles: Sequence[MetricBundle]) -> Tuple[Dict[str, float], Optional[Dict[str, float]]]:
    """Mean per metric, plus the sample std when there are at least two bundles"""
    frame = pd.DataFrame([b.as_dict() for b in bundles], columns=list(METRIC_KEYS))
    mean = {k: float(v) for k, v in frame.mean().items()}
    if len(bundles) < 2:
        return mean, None
    std = {k: float(v) for k, v in frame.std(ddof=1).items()}
    return mean, std


def run_cv(domain: DomainSpec, cfg: MlpConfig, k: int = CV_FOLDS, seed: int = 0) -> ExperimentResult:
    """Stratified k-fold cross-validation on the domain's generated training set"""
    data = generate_domain(domain, data_seed(seed, domain))
    folds = stratified_folds(data, k, fold_seed(seed, domain))

    bundles: List[MetricBundle] = []
    for i, held_out in enumerate(folds):
        train_idx = np.concatenate([fold for j, fold in enumerate(folds) if j != i])
        bundle = _fit_and_score(cfg, data.subset(train_idx), data.subset(held_out))
        logger.debug(f"{domain.label()} fold {i + 1}/{k}: gmean_macro={bundle.gmean_macro:.4f}")
        bundles.append(bundle)

    mean, std = _aggregate(bundles)
    return ExperimentResult(
        domain=domain,
        regimen=Regimen(kind="stratified_cv", k=k),
        depth=cfg.depth,
        hidden_units=cfg.hidden_units,
        seed=seed,
        folds=bundles,
        mean=mean,
        std=std,
    )


def run_balanced_test(domain: DomainSpec, cfg: MlpConfig, seed: int = 0) -> ExperimentResult:
    """Train on the full generated set, evaluate on the family's balanced test set"""
    train_ds = generate_domain(domain, data_seed(seed, domain))
    test_ds = balanced_testset(domain.family, domain.level)
    bundle = _fit_and_score(cfg, train_ds, test_ds)
    mean, std = _aggregate([bundle])
    return ExperimentResult(
        domain=domain,
        regimen=Regimen(kind="balanced_test"),
        depth=cfg.depth,
        hidden_units=cfg.hidden_units,
        seed=seed,
        folds=[bundle],
        mean=mean,
        std=std,
    )


def sweep_hidden_units(
    domain: DomainSpec,
    depth: int,
    candidates: Sequence[int] = HIDDEN_UNIT_CANDIDATES,
    regimen: Optional[Regimen] = None,
    seed: int = 0,
    *,
    epochs: int = DEFAULT_EPOCHS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> ExperimentResult:
    """Run the regimen for every hidden-unit candidate and keep the best.

    The winner has the highest mean macro G-Mean; ties go to fewer hidden
    units. Every candidate is kept in the result's audit list.
    """
    if not candidates:
        raise ValueError("candidates must not be empty")
    regimen = regimen or Regimen()

    best: Optional[ExperimentResult] = None
    audit: List[CandidateResult] = []
    for hu in sorted(set(candidates)):
        cfg = MlpConfig(
            depth=depth,
            hidden_units=hu,
            input_dim=domain.n_features,
            learning_rate=learning_rate,
            epochs=epochs,
            batch_size=batch_size,
            seed=model_seed(seed, domain, depth),
        )
        if regimen.kind == "stratified_cv":
            result = run_cv(domain, cfg, k=regimen.k, seed=seed)
        else:
            result = run_balanced_test(domain, cfg, seed=seed)
        audit.append(CandidateResult(hidden_units=hu, mean=result.mean, std=result.std))
        if best is None or result.gmean_macro > best.gmean_macro:
            best = result

    return best.model_copy(update={"candidates": audit})


def _run_cell(cell: GridCell) -> ExperimentResult:
    """Execute one cell, turning any exception into a failed record"""
    start = time.perf_counter()
    try:
        result = sweep_hidden_units(
            cell.domain,
            cell.depth,
            cell.candidates,
            cell.regimen,
            cell.seed,
            epochs=cell.epochs,
            learning_rate=cell.learning_rate,
            batch_size=cell.batch_size,
        )
    except Exception as e:
        logger.warning(f"Cell {cell.domain.label()} depth={cell.depth} seed={cell.seed} failed: {e}", exc_info=True)
        result = ExperimentResult(
            domain=cell.domain,
            regimen=cell.regimen,
            depth=cell.depth,
            seed=cell.seed,
            status="failed",
            error=f"{type(e).__name__}: {e}",
        )
    result.runtime_s = time.perf_counter() - start
    if result.ok:
        logger.info(
            f"{cell.domain.label()} depth={cell.depth} seed={cell.seed}: "
            f"hu={result.hidden_units} gmean_macro={result.gmean_macro:.4f} ({result.runtime_s:.1f}s)"
        )
    return result


def run_grid(
    grid: ExperimentGrid,
    jobs: int = 1,
    cache: Optional[CellCache] = None,
) -> List[ExperimentResult]:
    """Run every cell of a grid.

    Args:
        grid: Experiment grid
        jobs: Worker processes; 1 runs in-process
        cache: Optional cell cache consulted before and filled after each cell

    Returns:
        One result per cell, ordered by (family, regimen, domain parameters, depth, seed)
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    cells = sorted(grid.cells(), key=lambda c: c.sort_key())
    logger.info(f"Running {grid.family} grid: {len(cells)} cells, {jobs} job(s)")

    results: Dict[int, ExperimentResult] = {}
    pending: List[Tuple[int, GridCell]] = []
    for i, cell in enumerate(cells):
        cached = cache.load(cell) if cache is not None else None
        if cached is not None:
            results[i] = cached
        else:
            pending.append((i, cell))

    pending_cells = [cell for _, cell in pending]
    if jobs > 1 and len(pending_cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(_run_cell, pending_cells))
    else:
        fresh = [_run_cell(cell) for cell in pending_cells]

    for (i, cell), result in zip(pending, fresh):
        results[i] = result
        if cache is not None:
            cache.save(cell, result)

    ordered = [results[i] for i in range(len(cells))]
    failed = sum(1 for r in ordered if not r.ok)
    logger.info(f"Finished {grid.family} grid: {len(ordered) - failed} ok, {failed} failed")
    return ordered
