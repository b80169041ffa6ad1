from typing import Annotated, Any, Dict, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import MAX_LEVEL, MINORITY_FRACTIONS, OVERLAP_DIM, OVERLAP_MAX_LEVEL, OVERLAP_TOTAL

Family = Literal["backbone", "overlap", "gaussian_backbone"]

# Stable integer codes used when deriving seeds from a spec
FAMILY_CODES: Dict[str, int] = {"backbone": 0, "overlap": 1, "gaussian_backbone": 2}


class BackboneSpec(BaseModel):
    """Uniform backbone domain: complexity c, size s, balance b"""
    model_config = ConfigDict(frozen=True)

    family: Literal["backbone"] = "backbone"
    c: int = Field(..., ge=1, le=MAX_LEVEL)
    s: int = Field(..., ge=1, le=MAX_LEVEL)
    b: int = Field(..., ge=1, le=MAX_LEVEL)

    @property
    def level(self) -> int:
        return self.c

    @property
    def n_features(self) -> int:
        return 1

    @property
    def balance(self) -> float:
        return float(self.b)

    def seed_key(self) -> Tuple[int, ...]:
        return (FAMILY_CODES[self.family], self.c, self.s, self.b)

    def label(self) -> str:
        return f"backbone_c{self.c}_s{self.s}_b{self.b}"


class OverlapSpec(BaseModel):
    """5-D Gaussian overlap domain: overlap level k, minority fraction, total size"""
    model_config = ConfigDict(frozen=True)

    family: Literal["overlap"] = "overlap"
    k: int = Field(..., ge=1, le=OVERLAP_MAX_LEVEL)
    minority_frac: float
    total: int = Field(default=OVERLAP_TOTAL, ge=2)

    @field_validator("minority_frac")
    @classmethod
    def validate_minority_frac(cls, v: float) -> float:
        for allowed in MINORITY_FRACTIONS:
            if abs(v - allowed) < 1e-9:
                return allowed
        raise ValueError(f"minority_frac must be one of {list(MINORITY_FRACTIONS)}, got {v}")

    @property
    def level(self) -> int:
        return self.k

    @property
    def balance(self) -> float:
        return self.minority_frac

    @property
    def n_features(self) -> int:
        return OVERLAP_DIM

    def seed_key(self) -> Tuple[int, ...]:
        # fractions become basis points so the key stays integral
        return (FAMILY_CODES[self.family], self.k, int(round(self.minority_frac * 10000)), self.total)

    def label(self) -> str:
        return f"overlap_k{self.k}_m{int(round(self.minority_frac * 1000)):03d}_n{self.total}"


class GaussianBackboneSpec(BaseModel):
    """Backbone with c=2, s=5 whose subconcepts are Gaussians of variance level v"""
    model_config = ConfigDict(frozen=True)

    family: Literal["gaussian_backbone"] = "gaussian_backbone"
    v: int = Field(..., ge=1, le=MAX_LEVEL)
    b: int = Field(..., ge=1, le=MAX_LEVEL)

    @property
    def level(self) -> int:
        return self.v

    @property
    def balance(self) -> float:
        return float(self.b)

    @property
    def n_features(self) -> int:
        return 1

    def seed_key(self) -> Tuple[int, ...]:
        return (FAMILY_CODES[self.family], self.v, self.b)

    def label(self) -> str:
        return f"gaussian_backbone_v{self.v}_b{self.b}"


DomainSpec = Annotated[
    Union[BackboneSpec, OverlapSpec, GaussianBackboneSpec],
    Field(discriminator="family"),
]


class CountPlan(BaseModel):
    """Per-interval example counts for a backbone domain"""
    model_config = ConfigDict(frozen=True)

    per_interval_majority: int = Field(..., ge=1)
    per_interval_minority: int = Field(..., ge=1)
    n_intervals: int = Field(..., ge=2)

    @model_validator(mode="after")
    def check_minority_not_larger(self) -> "CountPlan":
        if self.per_interval_minority > self.per_interval_majority:
            raise ValueError("per_interval_minority cannot exceed per_interval_majority")
        return self


class DatasetManifest(BaseModel):
    """Sidecar record describing how a dataset file was produced"""
    family: Family
    role: Literal["train", "test"] = "train"
    params: Dict[str, Union[int, float]]
    seed: int
    class_counts: Dict[str, int]
    n_rows: int
    n_features: int


class Dataset(BaseModel):
    """Feature matrix with binary labels (1 = majority, 0 = minority)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray
    labels: np.ndarray
    manifest: Optional[DatasetManifest] = None

    @model_validator(mode="before")
    @classmethod
    def coerce_arrays(cls, data: Any) -> Any:
        if isinstance(data, dict):
            data = dict(data)
            features = np.array(data.get("features"), dtype=np.float64)
            if features.ndim == 1:
                features = features.reshape(-1, 1)
            raw_labels = np.asarray(data.get("labels")).reshape(-1)
            # checked before the int cast, which would truncate 0.7 to 0
            if raw_labels.size and not np.isin(raw_labels, (0, 1)).all():
                raise ValueError("labels must be 0 or 1")
            labels = raw_labels.astype(np.int64)
            features.setflags(write=False)
            labels.setflags(write=False)
            data["features"] = features
            data["labels"] = labels
        return data

    @model_validator(mode="after")
    def check_shapes(self) -> "Dataset":
        if self.features.ndim != 2:
            raise ValueError(f"features must be a 2-D matrix, got shape {self.features.shape}")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError(
                f"features have {self.features.shape[0]} rows but labels have {self.labels.shape[0]}"
            )
        if self.labels.shape[0] < 1:
            raise ValueError("dataset must contain at least one row")
        if not np.isin(self.labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        return self

    @property
    def n_rows(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def class_counts(self) -> Tuple[int, int]:
        """(n1, n0): majority count first"""
        n1 = int(np.count_nonzero(self.labels == 1))
        return n1, self.n_rows - n1

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(features=self.features[indices], labels=self.labels[indices])

    def equals(self, other: "Dataset") -> bool:
        return (
            np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )
