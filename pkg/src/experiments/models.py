from abc import ABC, abstractmethod
from typing import Annotated, Dict, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.settings import (
    CV_FOLDS,
    DEFAULT_BATCH_SIZE,
    DEFAULT_EPOCHS,
    DEFAULT_LEARNING_RATE,
    DEPTHS,
    HIDDEN_UNIT_CANDIDATES,
    MAX_LEVEL,
    MINORITY_FRACTIONS,
    OVERLAP_MAX_LEVEL,
    OVERLAP_TOTAL,
)
from src.domains.models import (
    FAMILY_CODES,
    BackboneSpec,
    DomainSpec,
    GaussianBackboneSpec,
    OverlapSpec,
)
from src.metrics.models import MetricBundle

LEVELS = list(range(1, MAX_LEVEL + 1))


def _sorted_unique(values: List, name: str) -> List:
    if not values:
        raise ValueError(f"{name} must not be empty")
    return sorted(set(values))


class Regimen(BaseModel):
    """Evaluation protocol: stratified k-fold CV or a balanced test set"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["stratified_cv", "balanced_test"] = "balanced_test"
    k: int = Field(default=CV_FOLDS, ge=2)

    def label(self) -> str:
        return f"cv{self.k}" if self.kind == "stratified_cv" else "balanced_test"


class GridBase(BaseModel, ABC):
    """Fields shared by every experiment grid"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    depths: List[int] = Field(default_factory=lambda: list(DEPTHS))
    hidden_unit_candidates: List[int] = Field(default_factory=lambda: list(HIDDEN_UNIT_CANDIDATES))
    seeds: List[int] = Field(..., min_length=1)
    regimen: Regimen = Field(default_factory=Regimen)
    epochs: int = Field(default=DEFAULT_EPOCHS, ge=1)
    learning_rate: float = Field(default=DEFAULT_LEARNING_RATE, gt=0)
    batch_size: int = Field(default=DEFAULT_BATCH_SIZE, ge=1)

    @field_validator("depths")
    @classmethod
    def validate_depths(cls, v: List[int]) -> List[int]:
        for depth in v:
            if not 1 <= depth <= max(DEPTHS):
                raise ValueError(f"depth must be in [1, {max(DEPTHS)}], got {depth}")
        return _sorted_unique(v, "depths")

    @field_validator("hidden_unit_candidates")
    @classmethod
    def validate_candidates(cls, v: List[int]) -> List[int]:
        for hu in v:
            if hu not in HIDDEN_UNIT_CANDIDATES:
                raise ValueError(f"hidden units must be one of {list(HIDDEN_UNIT_CANDIDATES)}, got {hu}")
        return _sorted_unique(v, "hidden_unit_candidates")

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        for seed in v:
            if seed < 0:
                raise ValueError(f"seeds must be non-negative, got {seed}")
        return v

    @abstractmethod
    def domain_specs(self) -> List[DomainSpec]:
        """Domain specs of the grid in enumeration order"""

    def cells(self) -> Iterator["GridCell"]:
        """Every (domain, depth, seed) combination of the grid"""
        for spec in self.domain_specs():
            for depth in self.depths:
                for seed in self.seeds:
                    yield GridCell(
                        domain=spec,
                        depth=depth,
                        seed=seed,
                        candidates=self.hidden_unit_candidates,
                        regimen=self.regimen,
                        epochs=self.epochs,
                        learning_rate=self.learning_rate,
                        batch_size=self.batch_size,
                    )


class BackboneGrid(GridBase):
    family: Literal["backbone"] = "backbone"
    c: List[int] = Field(default_factory=lambda: list(LEVELS))
    s: List[int] = Field(default_factory=lambda: list(LEVELS))
    b: List[int] = Field(default_factory=lambda: list(LEVELS))

    @field_validator("c", "s", "b")
    @classmethod
    def validate_levels(cls, v: List[int]) -> List[int]:
        for level in v:
            if not 1 <= level <= MAX_LEVEL:
                raise ValueError(f"level must be in [1, {MAX_LEVEL}], got {level}")
        return _sorted_unique(v, "levels")

    def domain_specs(self) -> List[DomainSpec]:
        return [BackboneSpec(c=c, s=s, b=b) for c in self.c for s in self.s for b in self.b]


class OverlapGrid(GridBase):
    family: Literal["overlap"] = "overlap"
    k: List[int] = Field(default_factory=lambda: list(range(1, OVERLAP_MAX_LEVEL + 1)))
    minority_fracs: List[float] = Field(default_factory=lambda: list(MINORITY_FRACTIONS))
    total: int = Field(default=OVERLAP_TOTAL, ge=2)

    @field_validator("k")
    @classmethod
    def validate_k(cls, v: List[int]) -> List[int]:
        for level in v:
            if not 1 <= level <= OVERLAP_MAX_LEVEL:
                raise ValueError(f"overlap level must be in [1, {OVERLAP_MAX_LEVEL}], got {level}")
        return _sorted_unique(v, "k")

    @field_validator("minority_fracs")
    @classmethod
    def validate_fracs(cls, v: List[float]) -> List[float]:
        snapped = []
        for frac in v:
            match = [allowed for allowed in MINORITY_FRACTIONS if abs(frac - allowed) < 1e-9]
            if not match:
                raise ValueError(f"minority fraction must be one of {list(MINORITY_FRACTIONS)}, got {frac}")
            snapped.append(match[0])
        return _sorted_unique(snapped, "minority_fracs")

    def domain_specs(self) -> List[DomainSpec]:
        return [OverlapSpec(k=k, minority_frac=f, total=self.total) for k in self.k for f in self.minority_fracs]


class GaussianBackboneGrid(GridBase):
    family: Literal["gaussian_backbone"] = "gaussian_backbone"
    v: List[int] = Field(default_factory=lambda: list(LEVELS))
    b: List[int] = Field(default_factory=lambda: list(LEVELS))

    @field_validator("v", "b")
    @classmethod
    def validate_levels(cls, v: List[int]) -> List[int]:
        for level in v:
            if not 1 <= level <= MAX_LEVEL:
                raise ValueError(f"level must be in [1, {MAX_LEVEL}], got {level}")
        return _sorted_unique(v, "levels")

    def domain_specs(self) -> List[DomainSpec]:
        return [GaussianBackboneSpec(v=v, b=b) for v in self.v for b in self.b]


ExperimentGrid = Annotated[
    Union[BackboneGrid, OverlapGrid, GaussianBackboneGrid],
    Field(discriminator="family"),
]


class GridCell(BaseModel):
    """One independent unit of work: a hidden-unit sweep for (domain, depth, seed)"""
    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    depth: int
    seed: int
    candidates: List[int]
    regimen: Regimen
    epochs: int
    learning_rate: float
    batch_size: int

    def sort_key(self) -> Tuple:
        return (
            FAMILY_CODES[self.domain.family],
            self.regimen.kind,
            self.regimen.k,
            self.domain.seed_key(),
            self.depth,
            self.seed,
        )


class CandidateResult(BaseModel):
    """Audit entry for one hidden-unit candidate of a sweep"""
    hidden_units: int
    mean: Dict[str, float]
    std: Optional[Dict[str, float]] = None


class ExperimentResult(BaseModel):
    """Outcome of one grid cell (or one regimen run)"""
    domain: DomainSpec
    regimen: Regimen
    depth: int
    hidden_units: Optional[int] = None
    seed: int
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None
    folds: List[MetricBundle] = Field(default_factory=list)
    mean: Dict[str, float] = Field(default_factory=dict)
    std: Optional[Dict[str, float]] = None
    candidates: List[CandidateResult] = Field(default_factory=list)
    # wall-clock time varies between runs, so it is kept out of serialized records
    runtime_s: float = Field(default=0.0, exclude=True)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def gmean_macro(self) -> float:
        return self.mean.get("gmean_macro", 0.0)

    def sort_key(self) -> Tuple:
        return (
            FAMILY_CODES[self.domain.family],
            self.regimen.kind,
            self.regimen.k,
            self.domain.seed_key(),
            self.depth,
            self.seed,
        )
