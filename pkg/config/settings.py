# Config package
import os
from pathlib import Path

from dotenv import load_dotenv

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent

load_dotenv(PROJECT_ROOT / ".env")

# Output Configuration
DEFAULT_OUTPUT_DIR = Path(os.getenv("IMBALANCE_OUTPUT_DIR", str(PROJECT_ROOT / "data" / "runs")))
DEFAULT_JOBS = int(os.getenv("IMBALANCE_JOBS", "1"))

# Cache Configuration (per-cell experiment results)
CACHE_ENABLED = os.getenv("IMBALANCE_CACHE_ENABLED", "false").lower() == "true"
RESULTS_CACHE_DIR = Path(os.getenv("IMBALANCE_CACHE_DIR", str(PROJECT_ROOT / "data" / "cache")))

# Backbone family
BACKBONE_BASE_COUNT = 5000 / 32  # examples per unit of 2^s before splitting into sub-intervals
MAX_LEVEL = 5

# Overlap family
OVERLAP_DIM = 5
OVERLAP_BASE_MEAN = 0.5
OVERLAP_MAX_LEVEL = 10
OVERLAP_TOTAL = 10000
MINORITY_FRACTIONS = (0.01, 0.025, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50)

# Gaussian backbone family (c=2, s=5 fixed)
GAUSSIAN_COMPLEXITY = 2
GAUSSIAN_MAJORITY_COUNT = 1250
GAUSSIAN_SIGMA_STEP = 0.03125  # sigma_v = v * step, i.e. v/8 of the 0.25 interval width

# Balanced test sets
BACKBONE_TEST_PER_INTERVAL = 1000
OVERLAP_TEST_PER_CLASS = 2000
GAUSSIAN_TEST_PER_SUBCONCEPT = 1000
TEST_SET_ENTROPY = 20220815  # every model in every grid sees the same test set per family/level

# Training defaults
DEFAULT_EPOCHS = 300
DEFAULT_LEARNING_RATE = 0.001
DEFAULT_BATCH_SIZE = 32
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
PROB_CLAMP = 1e-12
GRAD_CHECK_STEP = 1e-5
GRAD_CHECK_BIAS_SCALE = 0.1

# Experiment grids
DEPTHS = (1, 2, 3, 4, 5)
HIDDEN_UNIT_CANDIDATES = (2, 4, 8, 16)
CV_FOLDS = 10

# Logging Configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
