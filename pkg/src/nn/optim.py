"""
Adam with bias correction, operating in place on parameter dicts.
"""
from typing import Tuple

import numpy as np

from config.settings import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON
from .models import AdamState, MlpModel, Params


def init_adam_state(
    params: Params,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    epsilon: float = ADAM_EPSILON,
) -> AdamState:
    return AdamState(
        m={k: np.zeros_like(p) for k, p in params.items()},
        v={k: np.zeros_like(p) for k, p in params.items()},
        t=0,
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
    )


def adam_update(params: Params, state: AdamState, grads: Params, lr: float) -> None:
    """One Adam step on params (modified in place)"""
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    step_size = lr / bc1

    for k, param in params.items():
        g = grads[k]
        if g.shape != param.shape:
            raise ValueError(f"gradient for {k} has shape {g.shape}, parameter has {param.shape}")
        m = state.m[k]
        v = state.v[k]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        param -= step_size * m / (np.sqrt(v / bc2) + state.epsilon)


def adam_step(model: MlpModel, state: AdamState, grads: Params, lr: float) -> Tuple[MlpModel, AdamState]:
    """Apply one Adam update to the model; returns the (updated) model and state"""
    adam_update(model.params, state, grads, lr)
    return model, state
