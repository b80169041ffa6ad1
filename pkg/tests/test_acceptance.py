"""Long-running checks of the qualitative depth/imbalance findings.

Run with `pytest --runslow`; the grids use the default 300 epochs.
"""

import numpy as np
import pytest

from config.settings import DEFAULT_JOBS, OVERLAP_DIM
from src.cli.app import run
from src.domains.generators import (
    all_backbone_specs,
    all_gaussian_backbone_specs,
    all_overlap_specs,
    generate_domain,
)
from src.domains.models import BackboneSpec, OverlapSpec
from src.experiments.models import BackboneGrid, OverlapGrid, Regimen
from src.experiments.runner import run_balanced_test, run_cv, run_grid, sweep_hidden_units
from src.experiments.seeds import data_seed, model_seed
from src.nn.models import MlpConfig
from src.nn.training import train

pytestmark = pytest.mark.slow

SEEDS = [0, 1, 2]
TREND_SEEDS = [0, 1, 2, 3, 4]
GRID_DOMAINS = [*all_backbone_specs(), *all_overlap_specs(), *all_gaussian_backbone_specs()]


def _mean_gmean(results):
    assert all(r.ok for r in results)
    return float(np.mean([r.gmean_macro for r in results]))


def test_easy_domain_reaches_the_ceiling():
    result = sweep_hidden_units(BackboneSpec(c=1, s=5, b=5), 1, regimen=Regimen(), seed=0)
    assert result.gmean_macro >= 0.99


def test_depth_helps_on_structured_domains():
    by_depth = {}
    for depth in (1, 5):
        grid = BackboneGrid(c=[1, 2], s=[5], depths=[depth], seeds=SEEDS)
        by_depth[depth] = _mean_gmean(run_grid(grid, jobs=DEFAULT_JOBS))
    assert by_depth[5] >= 0.95
    assert by_depth[5] - by_depth[1] >= 0.05


def test_hardest_backbone_cell_stays_low():
    grid = BackboneGrid(c=[5], s=[1], b=[1], seeds=SEEDS)
    results = run_grid(grid, jobs=DEFAULT_JOBS)
    for depth in grid.depths:
        assert _mean_gmean([r for r in results if r.depth == depth]) <= 0.3


def test_depth_barely_matters_once_classes_separate():
    grid = OverlapGrid(k=[5, 10], minority_fracs=[0.01, 0.5], depths=[1, 5], seeds=[0])
    results = run_grid(grid, jobs=DEFAULT_JOBS)
    scores = {(r.domain.k, r.domain.minority_frac, r.depth): r.gmean_macro for r in results}
    for k in (5, 10):
        for frac in (0.01, 0.5):
            shallow, deep = scores[(k, frac, 1)], scores[(k, frac, 5)]
            assert shallow >= 0.95 and deep >= 0.95
            assert abs(deep - shallow) <= 0.05


def test_overlap_difficulty_falls_with_separation():
    grid = OverlapGrid(k=[1, 2, 3, 4, 5], minority_fracs=[0.05, 0.25, 0.5], depths=[1], seeds=[0])
    results = run_grid(grid, jobs=DEFAULT_JOBS)
    means = [_mean_gmean([r for r in results if r.domain.k == k]) for k in range(1, 6)]
    for lower, higher in zip(means, means[1:]):
        assert higher >= lower - 0.05


def test_preset_runs_are_byte_identical(tmp_path):
    for out in ("a", "b"):
        argv = ["experiment", "--preset", "fig2", "--seed", "7", "--no-cache", "--jobs", str(DEFAULT_JOBS)]
        assert run([*argv, "--out", str(tmp_path / out)]) == 0
    for name in ("fig2.jsonl", "fig2_pivot.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cv_on_easy_domain_reaches_the_ceiling():
    spec = BackboneSpec(c=1, s=5, b=5)
    cfg = MlpConfig(depth=1, hidden_units=8, input_dim=1, seed=model_seed(0, spec, 1))
    result = run_cv(spec, cfg, k=10, seed=0)
    assert len(result.folds) == 10
    assert result.gmean_macro >= 0.99


def test_hardest_backbone_cell_is_near_zero_at_depth_one():
    result = sweep_hidden_units(BackboneSpec(c=5, s=1, b=1), 1, regimen=Regimen(), seed=0)
    assert result.gmean_macro <= 0.1


def test_fully_overlapped_classes_stay_at_chance():
    # identical class distributions: any non-constant predictor lands near sqrt(0.5 * 0.5)
    spec = OverlapSpec(k=1, minority_frac=0.5)
    cfg = MlpConfig(depth=1, hidden_units=8, input_dim=OVERLAP_DIM, seed=model_seed(0, spec, 1))
    result = run_balanced_test(spec, cfg, seed=0)
    assert result.gmean_macro <= 0.55
    assert abs(result.mean["balanced_accuracy"] - 0.5) <= 0.05


def test_backbone_trend_over_complexity_and_balance():
    grid = BackboneGrid(c=[1, 2, 3], s=[3], b=[1, 3, 5], depths=[1], seeds=TREND_SEEDS)
    results = run_grid(grid, jobs=DEFAULT_JOBS)
    means = {
        (c, b): _mean_gmean([r for r in results if r.domain.c == c and r.domain.b == b])
        for c in grid.c
        for b in grid.b
    }
    for b in grid.b:
        for easier, harder in zip(grid.c, grid.c[1:]):
            assert means[(harder, b)] <= means[(easier, b)] + 0.05
    for c in grid.c:
        for skewed, balanced in zip(grid.b, grid.b[1:]):
            assert means[(c, balanced)] >= means[(c, skewed)] - 0.05


@pytest.mark.parametrize("spec", GRID_DOMAINS, ids=lambda spec: spec.label())
def test_training_stays_finite_on_every_grid_domain(spec):
    ds = generate_domain(spec, data_seed(0, spec))
    cfg = MlpConfig(depth=5, hidden_units=16, input_dim=ds.n_features, seed=model_seed(0, spec, 5))
    model, report = train(cfg, ds)
    assert model.is_finite()
    assert np.all(np.isfinite(report.epoch_losses))
