from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config.settings import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPSILON,
    DEFAULT_BATCH_SIZE,
    DEFAULT_EPOCHS,
    DEFAULT_LEARNING_RATE,
)

Params = Dict[str, np.ndarray]


class MlpConfig(BaseModel):
    """Architecture and training hyperparameters of one network"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    depth: int = Field(..., ge=1, description="Number of hidden layers")
    hidden_units: int = Field(..., ge=1, description="Units per hidden layer")
    input_dim: int = Field(..., ge=1)
    learning_rate: float = Field(default=DEFAULT_LEARNING_RATE, gt=0)
    epochs: int = Field(default=DEFAULT_EPOCHS, ge=1)
    batch_size: int = Field(default=DEFAULT_BATCH_SIZE, ge=1)
    seed: int = Field(default=0, ge=0)

    @property
    def layer_sizes(self) -> List[int]:
        return [self.input_dim] + [self.hidden_units] * self.depth + [1]


@dataclass
class MlpModel:
    """Dense ReLU network with a logistic output unit.

    Parameters are keyed W0, b0, ..., W{depth}, b{depth}; Wi has shape
    (fan_in, fan_out) and bi has shape (fan_out,).
    """
    config: MlpConfig
    params: Params

    @property
    def n_layers(self) -> int:
        return self.config.depth + 1

    def weights(self) -> List[np.ndarray]:
        return [self.params[f"W{i}"] for i in range(self.n_layers)]

    def copy(self) -> "MlpModel":
        return MlpModel(config=self.config, params={k: v.copy() for k, v in self.params.items()})

    def is_finite(self) -> bool:
        return all(np.isfinite(p).all() for p in self.params.values())


@dataclass
class AdamState:
    """First/second moment accumulators mirroring the model parameters"""
    m: Params
    v: Params
    t: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    epsilon: float = ADAM_EPSILON


@dataclass
class TrainReport:
    epoch_losses: List[float] = field(default_factory=list)
    final_parameters: Params = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        """JSON-friendly summary; parameters live in the model archive"""
        return {
            "epochs": len(self.epoch_losses),
            "epoch_losses": list(self.epoch_losses),
            "final_loss": self.epoch_losses[-1] if self.epoch_losses else None,
        }
