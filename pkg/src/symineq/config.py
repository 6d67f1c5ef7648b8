"""
Configuration module for symineq.

Contains runtime settings, numeric tolerances, and default trial parameters.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# =============================================================================
# Runtime Configuration
# =============================================================================

THREADS_ENV = "SYMINEQ_THREADS"
REPORT_DIR = Path(os.getenv("SYMINEQ_REPORT_DIR", "reports"))


def get_thread_count() -> int:
    """
    Resolve the trial parallelism cap from SYMINEQ_THREADS.

    Returns:
        Positive worker count (1 when the variable is unset)

    Raises:
        ValueError: if the variable is set to anything but a positive integer
    """
    raw = os.getenv(THREADS_ENV, "1").strip()
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {threads}")
    return threads


# =============================================================================
# Logging Configuration
# =============================================================================

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = Path("logs/symineq.log")

# =============================================================================
# Numeric Tolerances
# =============================================================================

DEFAULT_TOLERANCE = 1e-9
MATRIX_TOLERANCE = 1e-8  # eigensolver round-trip noise
COUNTEREXAMPLE_FACTOR = 10.0  # strict violation = margin below -10 * tol * scale

# =============================================================================
# Kernel Limits
# =============================================================================

MAX_DIM = 64
BRUTE_MAX_N = 16
BRUTE_MAX_TERMS = 10**6
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12

# =============================================================================
# Trial Defaults
# =============================================================================

DEFAULT_TRIALS = 1000
DEFAULT_SEED = 0
DEFAULT_N_RANGE = (2, 8)
DEFAULT_ENTRY_RANGE = (1e-2, 1e2)
DEFAULT_SPECTRUM_RANGE = (1e-1, 1e1)

ELEM_P_GRID = (0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
HOM_P_GRID = (1.0, 1.5, 2.0, 3.0)
RECIP_P_GRID = (-0.9, -0.5, -0.1)
PARSUM_P_GRID = (0.25, 0.5, 1.0, 2.0, 3.0)

# =============================================================================
# Counterexample Search
# =============================================================================

SEARCH_STEP = 0.25  # sigma of the multiplicative refinement
SEARCH_POLISH_STEPS = 64

# =============================================================================
# Monte Carlo
# =============================================================================

MC_MAX_K = 8  # estimator variance explodes beyond this
MC_BLOCK_SIZE = 65536
MC_DEFAULT_SAMPLES = 1_000_000
