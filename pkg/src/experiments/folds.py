import logging
from typing import List, Union

import numpy as np

from src.domains.models import Dataset

logger = logging.getLogger(__name__)


def stratified_folds(ds: Union[Dataset, np.ndarray], k: int, seed: int) -> List[np.ndarray]:
    """Split row indices into k stratified folds.

    Each class is permuted with the seeded generator and dealt round-robin
    over the folds; the dealing position carries over from class 1 to
    class 0, so both per-class and total fold sizes differ by at most 1.

    Args:
        ds: Dataset (or its label vector)
        k: Number of folds
        seed: Seed for the permutation

    Returns:
        k sorted, pairwise disjoint index arrays covering every row

    Raises:
        ValueError: If k < 2, k exceeds the row count or a class is absent
    """
    labels = ds.labels if isinstance(ds, Dataset) else np.asarray(ds).reshape(-1)
    n = labels.shape[0]
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of rows ({n})")

    rng = np.random.default_rng(seed)
    folds: List[List[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in (1, 0):
        idx = np.flatnonzero(labels == cls)
        if idx.size == 0:
            raise ValueError(f"class {cls} has no rows")
        for j, row in enumerate(rng.permutation(idx)):
            folds[(offset + j) % k].append(int(row))
        offset = (offset + idx.size) % k

    result = [np.sort(np.array(fold, dtype=np.int64)) for fold in folds]
    empty = sum(1 for fold in result if not np.any(labels[fold] == 0))
    if empty:
        logger.warning(f"{empty} of {k} folds contain no minority rows")
    logger.debug(f"Fold sizes: {[fold.size for fold in result]}")
    return result
