"""Tests for the synthetic domain generators."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.domains.generators import (
    all_backbone_specs,
    all_gaussian_backbone_specs,
    all_overlap_specs,
    backbone_counts,
    gaussian_centers,
    gaussian_minority_count,
    gaussian_sigma,
    gen_backbone,
    gen_backbone_testset,
    gen_gaussian_backbone,
    gen_gaussian_backbone_testset,
    gen_overlap,
    gen_overlap_testset,
    generate_domain,
    generate_family_testset,
    generate_testset,
    interval_index,
    overlap_means,
    round_half_up,
)
from src.domains.models import BackboneSpec, Dataset, GaussianBackboneSpec, OverlapSpec


def _ks_uniform(x, lo, hi):
    u = np.sort((x - lo) / (hi - lo))
    n = u.shape[0]
    upper = np.arange(1, n + 1) / n - u
    lower = u - np.arange(0, n) / n
    return max(upper.max(), lower.max())


# ---------------------------------------------------------------------------
# backbone
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "c,s,b,majority,minority,intervals",
    [
        (1, 5, 5, 2500, 2500, 2),
        (3, 1, 1, 39, 2, 8),
        (1, 1, 5, 156, 156, 2),
    ],
)
def test_backbone_counts_examples(c, s, b, majority, minority, intervals):
    plan = backbone_counts(BackboneSpec(c=c, s=s, b=b))
    assert plan.per_interval_majority == majority
    assert plan.per_interval_minority == minority
    assert plan.n_intervals == intervals


def test_round_half_up():
    assert round_half_up(2.5) == 3
    assert round_half_up(0.5) == 1
    assert round_half_up(2.4999) == 2


def test_every_backbone_spec_has_formula_counts():
    specs = list(all_backbone_specs())
    assert len(specs) == 125
    for spec in specs:
        plan = backbone_counts(spec)
        ds = gen_backbone(spec, seed=3)
        n1, n0 = ds.class_counts
        assert n1 == 2 ** (spec.c - 1) * plan.per_interval_majority
        assert n0 == 2 ** (spec.c - 1) * plan.per_interval_minority
        assert plan.per_interval_minority <= plan.per_interval_majority
        if spec.b == 5:
            assert n1 == n0


def test_backbone_labels_follow_interval_parity():
    for c in range(1, 6):
        ds = gen_backbone(BackboneSpec(c=c, s=2, b=3), seed=11)
        x = ds.features[:, 0]
        assert x.min() >= 0.0 and x.max() <= 1.0
        expected = np.where(interval_index(x, c) % 2 == 0, 1, 0)
        np.testing.assert_array_equal(ds.labels, expected)


def test_interval_index_closes_last_interval():
    assert interval_index(np.array([1.0]), 3)[0] == 7
    assert interval_index(np.array([0.0]), 3)[0] == 0
    assert interval_index(np.array([0.125]), 3)[0] == 1


def test_complexity_three_alternates_starting_with_majority():
    ds = gen_backbone_testset(3, 50, seed=5)
    x = ds.features[:, 0]
    for i in range(8):
        below_upper = x < (i + 1) * 0.125 if i < 7 else x <= 1.0
        in_interval = (x >= i * 0.125) & below_upper
        assert np.count_nonzero(in_interval) == 50
        assert set(ds.labels[in_interval]) == {1 if i % 2 == 0 else 0}


def test_easy_backbone_is_uniform_per_class():
    ds = gen_backbone(BackboneSpec(c=1, s=5, b=5), seed=42)
    x = ds.features[:, 0]
    left = x[ds.labels == 1]
    right = x[ds.labels == 0]
    assert left.shape[0] == 2500 and right.shape[0] == 2500
    assert left.max() < 0.5 and right.min() >= 0.5
    assert _ks_uniform(left, 0.0, 0.5) < 0.05
    assert _ks_uniform(right, 0.5, 1.0) < 0.05


def test_backbone_is_deterministic_per_seed():
    spec = BackboneSpec(c=2, s=3, b=2)
    assert gen_backbone(spec, seed=9).equals(gen_backbone(spec, seed=9))
    assert not gen_backbone(spec, seed=9).equals(gen_backbone(spec, seed=10))


@pytest.mark.parametrize("c,per_interval,rows", [(3, 1000, 8000), (1, 1000, 2000), (5, 10, 320)])
def test_backbone_testset_is_balanced(c, per_interval, rows):
    ds = gen_backbone_testset(c, per_interval, seed=1)
    assert ds.n_rows == rows
    assert ds.class_counts == (rows // 2, rows // 2)


def test_backbone_testset_rejects_bad_level():
    with pytest.raises(ValueError):
        gen_backbone_testset(6, seed=1)
    with pytest.raises(ValueError):
        gen_backbone_testset(2, 0, seed=1)


def test_backbone_spec_ranges():
    with pytest.raises(ValidationError):
        BackboneSpec(c=0, s=1, b=1)
    with pytest.raises(ValidationError):
        BackboneSpec(c=1, s=6, b=1)


# ---------------------------------------------------------------------------
# overlap
# ---------------------------------------------------------------------------

def test_overlap_means():
    mu1, mu0 = overlap_means(1)
    np.testing.assert_array_equal(mu1, mu0)
    np.testing.assert_array_equal(mu1, np.full(5, 0.5))
    _, mu0 = overlap_means(10)
    np.testing.assert_array_equal(mu0, np.full(5, 9.5))


def test_overlap_class_sizes():
    ds = gen_overlap(OverlapSpec(k=3, minority_frac=0.01), seed=1)
    assert ds.class_counts == (9900, 100)
    assert ds.n_features == 5
    balanced = gen_overlap(OverlapSpec(k=3, minority_frac=0.5), seed=1)
    assert balanced.class_counts == (5000, 5000)


def test_overlap_minority_never_empty():
    ds = gen_overlap(OverlapSpec(k=2, minority_frac=0.01, total=20), seed=1)
    assert ds.class_counts == (19, 1)


def test_overlap_moments():
    k = 4
    ds = gen_overlap(OverlapSpec(k=k, minority_frac=0.5), seed=7)
    mu1, mu0 = overlap_means(k)
    for label, mu in ((1, mu1), (0, mu0)):
        x = ds.features[ds.labels == label]
        bound = 4.0 / np.sqrt(x.shape[0])
        assert np.all(np.abs(x.mean(axis=0) - mu) < bound)
        cov = np.cov(x, rowvar=False)
        off_diagonal = cov[~np.eye(5, dtype=bool)]
        assert np.all(np.abs(off_diagonal) < bound)


def test_overlap_spec_rejects_unlisted_fraction():
    with pytest.raises(ValidationError):
        OverlapSpec(k=1, minority_frac=0.3333)
    with pytest.raises(ValidationError):
        OverlapSpec(k=11, minority_frac=0.5)
    assert OverlapSpec(k=1, minority_frac=0.1 + 1e-12).minority_frac == 0.10


@pytest.mark.parametrize("k,per_class", [(5, 2000), (1, 1)])
def test_overlap_testset_is_balanced(k, per_class):
    ds = gen_overlap_testset(k, per_class, seed=2)
    assert ds.class_counts == (per_class, per_class)


def test_overlap_testset_minority_mean():
    ds = gen_overlap_testset(3, 2000, seed=8)
    x = ds.features[ds.labels == 0]
    assert np.all(np.abs(x.mean(axis=0) - 2.5) < 4.0 / np.sqrt(x.shape[0]))


# ---------------------------------------------------------------------------
# Gaussian backbone
# ---------------------------------------------------------------------------

def test_gaussian_backbone_counts():
    assert gaussian_minority_count(5) == 1250
    assert gaussian_minority_count(1) == 78
    ds = gen_gaussian_backbone(GaussianBackboneSpec(v=2, b=1), seed=4)
    assert ds.class_counts == (2500, 156)
    balanced = gen_gaussian_backbone(GaussianBackboneSpec(v=2, b=5), seed=4)
    assert balanced.class_counts == (2500, 2500)


def test_gaussian_backbone_centers_and_sigma():
    np.testing.assert_allclose(gaussian_centers(), [0.125, 0.375, 0.625, 0.875])
    assert gaussian_sigma(1) == pytest.approx(0.03125)
    assert gaussian_sigma(5) == pytest.approx(0.15625)


def test_gaussian_backbone_subconcepts_sit_on_centers():
    ds = gen_gaussian_backbone(GaussianBackboneSpec(v=1, b=5), seed=6)
    x = ds.features[:, 0]
    # rows are written subconcept by subconcept
    for i, center in enumerate(gaussian_centers()):
        block = x[i * 1250:(i + 1) * 1250]
        assert abs(block.mean() - center) < 4 * gaussian_sigma(1) / np.sqrt(1250)
        assert set(ds.labels[i * 1250:(i + 1) * 1250]) == {1 if i % 2 == 0 else 0}


@pytest.mark.parametrize("v", [1, 2, 3, 4, 5])
def test_gaussian_backbone_testset_is_balanced(v):
    ds = gen_gaussian_backbone_testset(v, 1000, seed=3)
    assert ds.class_counts == (2000, 2000)
    tiny = gen_gaussian_backbone_testset(v, 1, seed=3)
    assert tiny.class_counts == (2, 2)


# ---------------------------------------------------------------------------
# dispatch and enumeration
# ---------------------------------------------------------------------------

def test_generate_domain_dispatch_and_manifest():
    spec = BackboneSpec(c=3, s=1, b=2)
    ds = generate_domain(spec, 7)
    assert ds.equals(gen_backbone(spec, 7))
    assert ds.manifest.family == "backbone"
    assert ds.manifest.role == "train"
    assert ds.manifest.params == {"c": 3, "s": 1, "b": 2}
    assert ds.manifest.seed == 7
    assert ds.manifest.class_counts == {"1": ds.class_counts[0], "0": ds.class_counts[1]}


def test_generate_testset_uses_family_level():
    assert generate_testset(OverlapSpec(k=4, minority_frac=0.05), 1).class_counts == (2000, 2000)
    assert generate_testset(BackboneSpec(c=2, s=1, b=1), 1).n_rows == 4000
    assert generate_testset(GaussianBackboneSpec(v=3, b=1), 1).manifest.role == "test"


def test_family_enumerations():
    assert len(list(all_overlap_specs())) == 120
    assert len(list(all_gaussian_backbone_specs())) == 25
    labels = [spec.label() for spec in all_backbone_specs()]
    assert labels[0] == "backbone_c1_s1_b1"
    assert labels[-1] == "backbone_c5_s5_b5"


def test_dataset_is_immutable_and_validated():
    ds = Dataset(features=[[0.1], [0.9]], labels=[1, 0])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 0.5
    with pytest.raises(ValidationError):
        Dataset(features=[[0.1]], labels=[2])
    with pytest.raises(ValidationError):
        Dataset(features=[[0.1], [0.2]], labels=[1])


def test_fractional_labels_are_rejected_not_truncated():
    with pytest.raises(ValidationError):
        Dataset(features=[[0.1], [0.2]], labels=[0.7, 1.9])
    ds = Dataset(features=[[0.1], [0.2]], labels=np.array([1.0, 0.0]))
    assert ds.labels.dtype == np.int64
    assert ds.class_counts == (1, 1)


def test_family_testset_dispatch():
    assert generate_family_testset("overlap", 2, 5).equals(generate_testset(OverlapSpec(k=2, minority_frac=0.5), 5))
    with pytest.raises(ValueError, match="Unknown family"):
        generate_family_testset("spiral", 1, 5)
