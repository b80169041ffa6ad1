"""
Counter-based seed derivation.

Every random draw of a grid cell comes from
SeedSequence(master, spawn_key=(stream, *counters)), so any cell can be
reproduced on its own from the master seed and its parameters. Balanced
test sets use a fixed entropy instead of the master seed, which keeps
them identical across grids and disjoint from every training stream.
"""
import numpy as np

from config.settings import TEST_SET_ENTROPY
from src.domains.models import FAMILY_CODES, DomainSpec

STREAM_DATA = 0
STREAM_MODEL = 1
STREAM_FOLDS = 2
STREAM_TEST = 3
STREAM_REPEAT = 4


def derive_seed(master: int, *counters: int) -> int:
    """64-bit seed for the given (master, counters) coordinates"""
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(c) for c in counters))
    return int(ss.generate_state(1, np.uint64)[0])


def data_seed(master: int, spec: DomainSpec) -> int:
    return derive_seed(master, STREAM_DATA, *spec.seed_key())


def model_seed(master: int, spec: DomainSpec, depth: int) -> int:
    # shared by every hidden-unit candidate of the cell
    return derive_seed(master, STREAM_MODEL, *spec.seed_key(), depth)


def fold_seed(master: int, spec: DomainSpec) -> int:
    return derive_seed(master, STREAM_FOLDS, *spec.seed_key())


def testset_seed(family: str, level: int) -> int:
    if family not in FAMILY_CODES:
        raise ValueError(f"Unknown family: {family}")
    return derive_seed(TEST_SET_ENTROPY, STREAM_TEST, FAMILY_CODES[family], level)


def repeat_seeds(master: int, repeats: int) -> list:
    """Seeds for repeated runs; a single repeat keeps the master seed itself"""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    if repeats == 1:
        return [master]
    return [derive_seed(master, STREAM_REPEAT, i) for i in range(repeats)]
