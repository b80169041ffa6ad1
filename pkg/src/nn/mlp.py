"""
Feedforward binary classifier with manual backpropagation.
Hidden layers use ReLU (subgradient 0 at 0), the output is a single
logistic unit and the loss is mean binary cross-entropy on probabilities
clamped to [PROB_CLAMP, 1 - PROB_CLAMP].
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from config.settings import GRAD_CHECK_BIAS_SCALE, GRAD_CHECK_STEP, PROB_CLAMP
from .models import MlpConfig, MlpModel, Params

logger = logging.getLogger(__name__)


def model_streams(seed: int) -> Tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """Independent (initialization, shuffling) seed streams for a config seed"""
    init_ss, shuffle_ss = np.random.SeedSequence(seed).spawn(2)
    return init_ss, shuffle_ss


def init_model(cfg: MlpConfig) -> MlpModel:
    """Uniform fan-based initialization with zero biases"""
    init_ss, _ = model_streams(cfg.seed)
    rng = np.random.default_rng(init_ss)
    sizes = cfg.layer_sizes
    params: Params = {}
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        params[f"W{i}"] = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        params[f"b{i}"] = np.zeros(fan_out)
    return MlpModel(config=cfg, params=params)


def _check_input(model: MlpModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[1] != model.config.input_dim:
        raise ValueError(f"expected input of shape (n, {model.config.input_dim}), got {X.shape}")
    return X


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # exp(-log(1 + exp(-z))) never overflows
    return np.exp(-np.logaddexp(0.0, -z))


def _forward_pass(model: MlpModel, X: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:
    """Returns (layer inputs, hidden pre-activations, raw output probabilities)"""
    inputs: List[np.ndarray] = []
    pre_activations: List[np.ndarray] = []
    a = X
    last = model.n_layers - 1
    for i in range(model.n_layers):
        inputs.append(a)
        z = a @ model.params[f"W{i}"] + model.params[f"b{i}"]
        if i < last:
            pre_activations.append(z)
            a = np.maximum(z, 0.0)
        else:
            a = _sigmoid(z[:, 0])
    return inputs, pre_activations, a


def forward(model: MlpModel, X: np.ndarray) -> np.ndarray:
    """Probabilities of class 1, strictly inside (0, 1)"""
    X = _check_input(model, X)
    _, _, p = _forward_pass(model, X)
    return np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)


def loss_and_grads(model: MlpModel, X: np.ndarray, y: np.ndarray) -> Tuple[float, Params]:
    """Mean clamped binary cross-entropy and its exact gradients.

    Args:
        model: Network to differentiate
        X: (n, input_dim) batch
        y: n labels in {0, 1}

    Returns:
        (loss, grads) with grads keyed like model.params

    Raises:
        ValueError: On shape mismatch or labels outside {0, 1}
    """
    X = _check_input(model, X)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("labels must be 0 or 1")
    n = X.shape[0]

    inputs, pre_activations, p_raw = _forward_pass(model, X)
    clipped = (p_raw < PROB_CLAMP) | (p_raw > 1.0 - PROB_CLAMP)
    p = np.clip(p_raw, PROB_CLAMP, 1.0 - PROB_CLAMP)
    loss = float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))

    # d loss / d output logit; the clamp is flat where it is active
    dz = np.where(clipped, 0.0, (p_raw - y) / n).reshape(-1, 1)

    grads: Params = {}
    for i in range(model.n_layers - 1, -1, -1):
        grads[f"W{i}"] = inputs[i].T @ dz
        grads[f"b{i}"] = dz.sum(axis=0)
        if i > 0:
            da = dz @ model.params[f"W{i}"].T
            dz = da * (pre_activations[i - 1] > 0.0)
    return loss, {k: grads[k] for k in model.params}


def predict(model: MlpModel, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Label 1 iff the probability is at least threshold"""
    return (forward(model, X) >= threshold).astype(np.int64)


def _loss_and_masks(model: MlpModel, X: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
    """Clamped loss together with the rectifier on/off pattern of every hidden layer"""
    _, pre_activations, p_raw = _forward_pass(model, X)
    p = np.clip(p_raw, PROB_CLAMP, 1.0 - PROB_CLAMP)
    loss = float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))
    return loss, [z > 0.0 for z in pre_activations]


def _same_masks(a: List[np.ndarray], b: List[np.ndarray]) -> bool:
    return all(np.array_equal(m, n) for m, n in zip(a, b))


def offset_biases(model: MlpModel, scale: float = GRAD_CHECK_BIAS_SCALE) -> MlpModel:
    """Copy of model with biases drawn from U(-scale, scale).

    The draw comes from a third stream of the config seed, so it never
    overlaps the initialization or shuffling streams.
    """
    out = model.copy()
    bias_ss = np.random.SeedSequence(model.config.seed).spawn(3)[2]
    rng = np.random.default_rng(bias_ss)
    for i in range(out.n_layers):
        out.params[f"b{i}"] = rng.uniform(-scale, scale, size=out.params[f"b{i}"].shape)
    return out


def grad_check(
    cfg: MlpConfig,
    X: np.ndarray,
    y: np.ndarray,
    h: float = GRAD_CHECK_STEP,
    model: Optional[MlpModel] = None,
) -> float:
    """Largest relative error between analytic and central-difference gradients.

    The relative error of one entry is |a - n| / max(|a|, |n|, 1e-8).
    Without an explicit model the check runs at the seeded initialization
    with small nonzero biases (see offset_biases). Entries whose +h or -h
    step switches any rectifier on or off are skipped, since the central
    difference there spans a kink.
    """
    model = model.copy() if model is not None else offset_biases(init_model(cfg))
    X = _check_input(model, X)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    _, analytic = loss_and_grads(model, X, y)
    _, base_masks = _loss_and_masks(model, X, y)

    worst = 0.0
    skipped = 0
    for key, param in model.params.items():
        for idx in np.ndindex(param.shape):
            original = param[idx]
            param[idx] = original + h
            plus, plus_masks = _loss_and_masks(model, X, y)
            param[idx] = original - h
            minus, minus_masks = _loss_and_masks(model, X, y)
            param[idx] = original

            if not (_same_masks(base_masks, plus_masks) and _same_masks(base_masks, minus_masks)):
                skipped += 1
                continue
            numeric = (plus - minus) / (2.0 * h)
            a = analytic[key][idx]
            rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            worst = max(worst, rel)
    logger.debug(
        f"grad_check depth={cfg.depth} hu={cfg.hidden_units} h={h}: "
        f"max rel error {worst:.3e}, {skipped} entries at a kink skipped"
    )
    return worst
