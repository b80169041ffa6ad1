from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Stable key order for result records and reports
METRIC_KEYS: Tuple[str, ...] = (
    "sensitivity_class0",
    "specificity_class0",
    "sensitivity_class1",
    "specificity_class1",
    "gmean_class0",
    "gmean_class1",
    "gmean_macro",
    "gmean_weighted",
    "f1_macro",
    "balanced_accuracy",
)


class ConfusionMatrix(BaseModel):
    """Binary confusion counts with class 1 (majority) as the positive class"""
    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def n_class1(self) -> int:
        return self.tp + self.fn

    @property
    def n_class0(self) -> int:
        return self.tn + self.fp


class MetricBundle(BaseModel):
    """Every evaluation metric for one confusion matrix"""
    model_config = ConfigDict(frozen=True)

    sensitivity_class0: float = Field(..., ge=0.0, le=1.0)
    specificity_class0: float = Field(..., ge=0.0, le=1.0)
    sensitivity_class1: float = Field(..., ge=0.0, le=1.0)
    specificity_class1: float = Field(..., ge=0.0, le=1.0)
    gmean_class0: float = Field(..., ge=0.0, le=1.0)
    gmean_class1: float = Field(..., ge=0.0, le=1.0)
    gmean_macro: float = Field(..., ge=0.0, le=1.0)
    gmean_weighted: float = Field(..., ge=0.0, le=1.0)
    f1_macro: float = Field(..., ge=0.0, le=1.0)
    balanced_accuracy: float = Field(..., ge=0.0, le=1.0)

    def as_dict(self) -> Dict[str, float]:
        return {key: getattr(self, key) for key in METRIC_KEYS}
