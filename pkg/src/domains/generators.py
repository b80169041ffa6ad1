"""
Synthetic domain generators.
Three families: the uniform backbone (structural concept complexity, size,
balance), the 5-D Gaussian overlap domains, and the Gaussian backbone hybrid.
Every generator is a pure function of (spec, seed).
"""
import logging
import math
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from config.settings import (
    BACKBONE_BASE_COUNT,
    BACKBONE_TEST_PER_INTERVAL,
    GAUSSIAN_COMPLEXITY,
    GAUSSIAN_MAJORITY_COUNT,
    GAUSSIAN_SIGMA_STEP,
    GAUSSIAN_TEST_PER_SUBCONCEPT,
    MAX_LEVEL,
    MINORITY_FRACTIONS,
    OVERLAP_BASE_MEAN,
    OVERLAP_DIM,
    OVERLAP_MAX_LEVEL,
    OVERLAP_TEST_PER_CLASS,
)
from .models import (
    BackboneSpec,
    CountPlan,
    Dataset,
    DatasetManifest,
    GaussianBackboneSpec,
    OverlapSpec,
)

logger = logging.getLogger(__name__)

AnySpec = Union[BackboneSpec, OverlapSpec, GaussianBackboneSpec]


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves going up"""
    return int(math.floor(value + 0.5))


def _balance_divisor(b: int) -> float:
    return 32 / 2 ** b


def _manifest(family: str, role: str, params: dict, seed: int, labels: np.ndarray, n_features: int) -> DatasetManifest:
    n1 = int(np.count_nonzero(labels == 1))
    return DatasetManifest(
        family=family,
        role=role,
        params=params,
        seed=seed,
        class_counts={"1": n1, "0": int(labels.shape[0]) - n1},
        n_rows=int(labels.shape[0]),
        n_features=n_features,
    )


# ---------------------------------------------------------------------------
# Uniform backbone
# ---------------------------------------------------------------------------

def backbone_counts(spec: BackboneSpec) -> CountPlan:
    """Per-interval majority/minority counts for a backbone spec.

    The minority count divides the exact (unrounded) majority count, and
    both are floored at 1 so no sub-interval is left empty.
    """
    n_intervals = 2 ** spec.c
    majority_exact = BACKBONE_BASE_COUNT * 2 ** spec.s / n_intervals
    minority_exact = majority_exact / _balance_divisor(spec.b)
    return CountPlan(
        per_interval_majority=max(1, round_half_up(majority_exact)),
        per_interval_minority=max(1, round_half_up(minority_exact)),
        n_intervals=n_intervals,
    )


def interval_index(x: np.ndarray, c: int) -> np.ndarray:
    """Sub-interval index of each point; x = 1.0 belongs to the last interval"""
    n_intervals = 2 ** c
    idx = np.floor(np.asarray(x, dtype=np.float64) * n_intervals).astype(np.int64)
    return np.clip(idx, 0, n_intervals - 1)


def _sample_backbone(c: int, counts: Sequence[int], rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    n_intervals = 2 ** c
    width = 1.0 / n_intervals
    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    for i, count in enumerate(counts):
        lo = i * width
        hi = (i + 1) * width
        x = rng.uniform(lo, hi, size=count)
        if i < n_intervals - 1:
            # half-open intervals: keep rounding from landing on the next boundary
            x = np.minimum(x, np.nextafter(hi, lo))
        xs.append(x)
        ys.append(np.full(count, 1 if i % 2 == 0 else 0, dtype=np.int64))
    return np.concatenate(xs).reshape(-1, 1), np.concatenate(ys)


def gen_backbone(spec: BackboneSpec, seed: int) -> Dataset:
    """Generate a uniform backbone training set.

    Args:
        spec: Complexity, size and balance levels
        seed: Seed for the numpy generator

    Returns:
        Dataset with one feature in [0, 1]; even intervals are class 1
    """
    plan = backbone_counts(spec)
    counts = [
        plan.per_interval_majority if i % 2 == 0 else plan.per_interval_minority
        for i in range(plan.n_intervals)
    ]
    rng = np.random.default_rng(seed)
    features, labels = _sample_backbone(spec.c, counts, rng)
    logger.debug(f"Generated {spec.label()} with seed {seed}: {labels.shape[0]} rows")
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest("backbone", "train", spec.model_dump(exclude={"family"}), seed, labels, 1),
    )


def gen_backbone_testset(c: int, per_interval: int = BACKBONE_TEST_PER_INTERVAL, *, seed: int) -> Dataset:
    """Balanced backbone test set with per_interval points in every sub-interval"""
    if not 1 <= c <= MAX_LEVEL:
        raise ValueError(f"c must be in [1, {MAX_LEVEL}], got {c}")
    if per_interval < 1:
        raise ValueError(f"per_interval must be >= 1, got {per_interval}")
    rng = np.random.default_rng(seed)
    features, labels = _sample_backbone(c, [per_interval] * 2 ** c, rng)
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest("backbone", "test", {"c": c, "per_interval": per_interval}, seed, labels, 1),
    )


# ---------------------------------------------------------------------------
# 5-D Gaussian overlap
# ---------------------------------------------------------------------------

def overlap_means(k: int) -> Tuple[np.ndarray, np.ndarray]:
    """(majority mean, minority mean); the minority mean moves by k-1 in every dimension"""
    majority = np.full(OVERLAP_DIM, OVERLAP_BASE_MEAN)
    minority = np.full(OVERLAP_DIM, OVERLAP_BASE_MEAN + (k - 1))
    return majority, minority


def overlap_class_sizes(spec: OverlapSpec) -> Tuple[int, int]:
    """(n1, n0) for an overlap spec"""
    n0 = max(1, round_half_up(spec.minority_frac * spec.total))
    return spec.total - n0, n0


def _sample_overlap(k: int, n1: int, n0: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    mu1, mu0 = overlap_means(k)
    x1 = mu1 + rng.standard_normal((n1, OVERLAP_DIM))
    x0 = mu0 + rng.standard_normal((n0, OVERLAP_DIM))
    labels = np.concatenate([np.ones(n1, dtype=np.int64), np.zeros(n0, dtype=np.int64)])
    return np.vstack([x1, x0]), labels


def gen_overlap(spec: OverlapSpec, seed: int) -> Dataset:
    """Generate an overlap training set (majority first, then minority rows)"""
    n1, n0 = overlap_class_sizes(spec)
    rng = np.random.default_rng(seed)
    features, labels = _sample_overlap(spec.k, n1, n0, rng)
    logger.debug(f"Generated {spec.label()} with seed {seed}: n1={n1}, n0={n0}")
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest("overlap", "train", spec.model_dump(exclude={"family"}), seed, labels, OVERLAP_DIM),
    )


def gen_overlap_testset(k: int, per_class: int = OVERLAP_TEST_PER_CLASS, *, seed: int) -> Dataset:
    """Balanced overlap test set at level k"""
    if not 1 <= k <= OVERLAP_MAX_LEVEL:
        raise ValueError(f"k must be in [1, {OVERLAP_MAX_LEVEL}], got {k}")
    if per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    rng = np.random.default_rng(seed)
    features, labels = _sample_overlap(k, per_class, per_class, rng)
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest("overlap", "test", {"k": k, "per_class": per_class}, seed, labels, OVERLAP_DIM),
    )


# ---------------------------------------------------------------------------
# Gaussian backbone
# ---------------------------------------------------------------------------

def gaussian_centers() -> np.ndarray:
    n_intervals = 2 ** GAUSSIAN_COMPLEXITY
    return (np.arange(n_intervals) + 0.5) / n_intervals


def gaussian_sigma(v: int) -> float:
    return v * GAUSSIAN_SIGMA_STEP


def gaussian_minority_count(b: int) -> int:
    return max(1, round_half_up(GAUSSIAN_MAJORITY_COUNT / _balance_divisor(b)))


def _sample_gaussian_backbone(v: int, counts: Sequence[int], rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    sigma = gaussian_sigma(v)
    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    for i, (center, count) in enumerate(zip(gaussian_centers(), counts)):
        xs.append(rng.normal(center, sigma, size=count))
        ys.append(np.full(count, 1 if i % 2 == 0 else 0, dtype=np.int64))
    return np.concatenate(xs).reshape(-1, 1), np.concatenate(ys)


def gen_gaussian_backbone(spec: GaussianBackboneSpec, seed: int) -> Dataset:
    """Generate a Gaussian backbone training set (subconcepts 0 and 2 are class 1)"""
    minority = gaussian_minority_count(spec.b)
    counts = [GAUSSIAN_MAJORITY_COUNT, minority, GAUSSIAN_MAJORITY_COUNT, minority]
    rng = np.random.default_rng(seed)
    features, labels = _sample_gaussian_backbone(spec.v, counts, rng)
    logger.debug(f"Generated {spec.label()} with seed {seed}: minority {minority} per subconcept")
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest("gaussian_backbone", "train", spec.model_dump(exclude={"family"}), seed, labels, 1),
    )


def gen_gaussian_backbone_testset(v: int, per_subconcept: int = GAUSSIAN_TEST_PER_SUBCONCEPT, *, seed: int) -> Dataset:
    """Balanced Gaussian backbone test set at variance level v"""
    if not 1 <= v <= MAX_LEVEL:
        raise ValueError(f"v must be in [1, {MAX_LEVEL}], got {v}")
    if per_subconcept < 1:
        raise ValueError(f"per_subconcept must be >= 1, got {per_subconcept}")
    rng = np.random.default_rng(seed)
    features, labels = _sample_gaussian_backbone(v, [per_subconcept] * 4, rng)
    return Dataset(
        features=features,
        labels=labels,
        manifest=_manifest(
            "gaussian_backbone", "test", {"v": v, "per_subconcept": per_subconcept}, seed, labels, 1
        ),
    )


# ---------------------------------------------------------------------------
# Dispatch helpers
# ---------------------------------------------------------------------------

def generate_domain(spec: AnySpec, seed: int) -> Dataset:
    """Generate the training set for any domain spec"""
    if isinstance(spec, BackboneSpec):
        return gen_backbone(spec, seed)
    elif isinstance(spec, OverlapSpec):
        return gen_overlap(spec, seed)
    elif isinstance(spec, GaussianBackboneSpec):
        return gen_gaussian_backbone(spec, seed)
    else:
        raise ValueError(f"Unsupported domain spec: {spec!r}")


def generate_family_testset(family: str, level: int, seed: int) -> Dataset:
    """Generate a family's balanced test set at one complexity/overlap level"""
    if family == "backbone":
        return gen_backbone_testset(level, BACKBONE_TEST_PER_INTERVAL, seed=seed)
    elif family == "overlap":
        return gen_overlap_testset(level, OVERLAP_TEST_PER_CLASS, seed=seed)
    elif family == "gaussian_backbone":
        return gen_gaussian_backbone_testset(level, GAUSSIAN_TEST_PER_SUBCONCEPT, seed=seed)
    raise ValueError(f"Unknown family: {family}")


def generate_testset(spec: AnySpec, seed: int) -> Dataset:
    """Generate the family's balanced test set at the spec's level"""
    return generate_family_testset(spec.family, spec.level, seed)


def all_backbone_specs(sizes: Sequence[int] = range(1, MAX_LEVEL + 1)) -> Iterator[BackboneSpec]:
    for c in range(1, MAX_LEVEL + 1):
        for s in sizes:
            for b in range(1, MAX_LEVEL + 1):
                yield BackboneSpec(c=c, s=s, b=b)


def all_overlap_specs() -> Iterator[OverlapSpec]:
    for k in range(1, OVERLAP_MAX_LEVEL + 1):
        for frac in MINORITY_FRACTIONS:
            yield OverlapSpec(k=k, minority_frac=frac)


def all_gaussian_backbone_specs() -> Iterator[GaussianBackboneSpec]:
    for v in range(1, MAX_LEVEL + 1):
        for b in range(1, MAX_LEVEL + 1):
            yield GaussianBackboneSpec(v=v, b=b)
