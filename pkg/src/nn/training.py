"""
Mini-batch training loop and model archives.
"""
import json
import logging
import time
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from src.domains.models import Dataset
from src.errors import TrainingDivergedError
from .mlp import init_model, loss_and_grads, model_streams
from .models import MlpConfig, MlpModel, TrainReport
from .optim import adam_step, init_adam_state

logger = logging.getLogger(__name__)


def train(cfg: MlpConfig, train_ds: Dataset) -> Tuple[MlpModel, TrainReport]:
    """Train a fresh network on a dataset.

    Rows are reshuffled every epoch with the config's shuffle stream and
    consumed in batches of cfg.batch_size (the last batch may be smaller).

    Args:
        cfg: Architecture, hyperparameters and seed
        train_ds: Training data; either class may be absent

    Returns:
        (trained model, report with the per-epoch mean loss)

    Raises:
        ValueError: If the dataset width differs from cfg.input_dim
        TrainingDivergedError: If a batch loss or a parameter becomes non-finite
    """
    if train_ds.n_features != cfg.input_dim:
        raise ValueError(f"dataset has {train_ds.n_features} features, config expects {cfg.input_dim}")

    start = time.perf_counter()
    model = init_model(cfg)
    state = init_adam_state(model.params)
    _, shuffle_ss = model_streams(cfg.seed)
    rng = np.random.default_rng(shuffle_ss)

    X = train_ds.features
    y = train_ds.labels.astype(np.float64)
    n = train_ds.n_rows
    report = TrainReport()

    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for lo in range(0, n, cfg.batch_size):
            idx = order[lo:lo + cfg.batch_size]
            loss, grads = loss_and_grads(model, X[idx], y[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch + 1}")
            adam_step(model, state, grads, cfg.learning_rate)
            total += loss * idx.shape[0]

        if not model.is_finite():
            raise TrainingDivergedError(f"non-finite parameters after epoch {epoch + 1}")
        report.epoch_losses.append(total / n)
        logger.debug(f"epoch {epoch + 1}/{cfg.epochs}: loss {total / n:.6f}")

    report.final_parameters = {k: v.copy() for k, v in model.params.items()}
    report.wall_time_s = time.perf_counter() - start
    logger.debug(
        f"Trained depth={cfg.depth} hu={cfg.hidden_units} on {n} rows "
        f"in {report.wall_time_s:.2f}s (final loss {report.epoch_losses[-1]:.6f})"
    )
    return model, report


def save_model(model: MlpModel, path: Union[str, Path]) -> Path:
    """Write parameters and config to a .npz archive"""
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_name(path.name + ".npz")
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, config=np.array(model.config.model_dump_json()), **model.params)
    logger.debug(f"Model saved to {path}")
    return path


def load_model(path: Union[str, Path]) -> MlpModel:
    """Read an archive written by save_model"""
    with np.load(Path(path), allow_pickle=False) as archive:
        cfg = MlpConfig.model_validate(json.loads(str(archive["config"])))
        params = {f"{kind}{i}": archive[f"{kind}{i}"].copy() for i in range(cfg.depth + 1) for kind in ("W", "b")}
    return MlpModel(config=cfg, params=params)
