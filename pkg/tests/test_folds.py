"""Tests for the stratified fold splitter."""

import logging

import numpy as np
import pytest

from src.experiments.folds import stratified_folds


def _labels(n1, n0):
    return np.array([1] * n1 + [0] * n0)


def _check_partition(folds, n):
    joined = np.concatenate(folds)
    assert joined.shape[0] == n
    np.testing.assert_array_equal(np.sort(joined), np.arange(n))
    for fold in folds:
        np.testing.assert_array_equal(fold, np.sort(fold))


def test_ninety_ten_split():
    labels = _labels(90, 10)
    folds = stratified_folds(labels, 10, seed=1)
    assert len(folds) == 10
    _check_partition(folds, 100)
    for fold in folds:
        assert np.count_nonzero(labels[fold] == 1) == 9
        assert np.count_nonzero(labels[fold] == 0) == 1


def test_scarce_minority_leaves_folds_without_it(caplog):
    labels = _labels(10, 3)
    with caplog.at_level(logging.WARNING):
        folds = stratified_folds(labels, 10, seed=4)
    without_minority = sum(1 for fold in folds if not np.any(labels[fold] == 0))
    assert without_minority == 7
    assert "no minority rows" in caplog.text


@pytest.mark.parametrize("n1,n0,k", [(37, 5, 10), (50, 50, 10), (11, 2, 3), (1000, 13, 7), (9, 4, 5)])
def test_fold_sizes_differ_by_at_most_one(n1, n0, k):
    labels = _labels(n1, n0)
    folds = stratified_folds(labels, k, seed=n1 + n0)
    _check_partition(folds, n1 + n0)
    for cls in (0, 1):
        per_fold = [np.count_nonzero(labels[fold] == cls) for fold in folds]
        assert max(per_fold) - min(per_fold) <= 1
    sizes = [fold.shape[0] for fold in folds]
    assert max(sizes) - min(sizes) <= 1


def test_folds_are_deterministic_per_seed():
    labels = _labels(40, 12)
    a = stratified_folds(labels, 5, seed=3)
    b = stratified_folds(labels, 5, seed=3)
    c = stratified_folds(labels, 5, seed=4)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not all(np.array_equal(x, y) for x, y in zip(a, c))


def test_accepts_a_dataset(separable_dataset):
    folds = stratified_folds(separable_dataset, 4, seed=0)
    _check_partition(folds, separable_dataset.n_rows)


def test_invalid_requests():
    with pytest.raises(ValueError):
        stratified_folds(_labels(5, 5), 1, seed=0)
    with pytest.raises(ValueError):
        stratified_folds(_labels(3, 2), 6, seed=0)
    with pytest.raises(ValueError):
        stratified_folds(_labels(10, 0), 2, seed=0)
