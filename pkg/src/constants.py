"""Constants"""
from enum import Enum

# Series evaluation
DEFAULT_TOL: float = 1e-8
MIN_TOL: float = 1e-13
# factors of an infinite q-Pochhammer product below this distance from 1 are dropped
POCHHAMMER_FACTOR_EPS: float = 1e-18
MAX_SERIES_TERMS: int = 50_000_000
MAX_DISPLACEMENT_WINDOW: int = 4_000_000
INITIAL_DISPLACEMENT_WINDOW: int = 16

# Sampling
TRUNC_GEOM_BATCH: int = 4096
STREAM_BATCH: int = 4096
STREAM_HOLE_CAPACITY: int = 64

# Estimators
MIN_RATIO_BLOCKS: int = 1000
MIN_COVARIANCE_BLOCKS: int = 10_000
MIN_GOF_OBSERVATIONS: int = 10_000
GOF_MIN_EXPECTED: float = 5.0
GOF_ALPHA: float = 0.001
SE_BAND: float = 4.0
CI95_Z: float = 1.959963984540054
LMAX_RENEWAL: int = 50

# Oracle
ORACLE_MAX_N: int = 8
ORACLE_WINDOW_MAX_N: int = 9

# Experiments
DEFAULT_N: int = 1000
DEFAULT_REPLICATES: int = 10_000
DEFAULT_SEED: int = 20240601
DEFAULT_ELL: int = 2
DEFAULT_WINDOW: int = 64
DEFAULT_KMAX: int = 2
DEFAULT_REGEN_STEPS: int = 1_000_000
BOOTSTRAP_RESAMPLES: int = 400
CLT_VARIANCE_REL_TOL: float = 0.15
CLT_SKEW_BAND: float = 0.15
CLT_KURTOSIS_BAND: float = 0.3
CLT_MIN_N: int = 2000
CLT_MIN_REPLICATES: int = 5000
ODD_TV_THRESHOLD: float = 0.02
ODD_MASS_RATIO: float = 1.2
SUBCRITICAL_Q_GRID: tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 20))
SUPERCRITICAL_Q_GRID: tuple[float, ...] = (1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 15.0, 20.0, 25.0)
CSV_FLOAT_FORMAT: str = "%.12g"
OUTPUT_LOCK_TIMEOUT_SECONDS: float = 30.0

class ExitCode(Enum):
    """
    ExitCode definitions
    """
    EXIT_NORMAL: int = 0
    EXIT_FAILED_ACCEPTANCE: int = 1
    EXIT_FAILED_CLICK_USAGE: int = 2
    EXIT_FAILED_OUTPUT_LOCKED: int = 3
