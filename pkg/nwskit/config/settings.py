"""
Configuration settings for the NWS toolkit.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Logging configuration
LOG_LEVEL = os.getenv("NWS_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("NWS_LOG_FILE")  # No file handler unless set
LOG_TIMEZONE = os.getenv("NWS_LOG_TIMEZONE", "UTC")

# Reproducibility
DEFAULT_SEED = int(os.getenv("NWS_SEED", "20240601"))

# Identically-zero test
ZERO_TEST_TOL = float(os.getenv("NWS_ZERO_TEST_TOL", "1e-9"))
ZERO_TEST_TRIALS = int(os.getenv("NWS_ZERO_TEST_TRIALS", "64"))
ZERO_TEST_MAX_POLE_FRACTION = 0.9

# Sampled nonvanishing checks on coefficient triples and transforms
NONVANISHING_SAMPLES = int(os.getenv("NWS_NONVANISHING_SAMPLES", "64"))

# Quadrature and inversion
QUAD_TOL = float(os.getenv("NWS_QUAD_TOL", "1e-12"))
CHECKPOINT_SPACING = float(os.getenv("NWS_CHECKPOINT_SPACING", "1.0"))
INVERSION_TOL = float(os.getenv("NWS_INVERSION_TOL", "1e-13"))

# Special functions
SN_POLE_THRESHOLD = 1e-12
AGM_TOL = 1e-15
AGM_MAX_ITER = 12

# Solution catalog
POLE_MARGIN = float(os.getenv("NWS_POLE_MARGIN", "0.05"))

# Symmetry verification box
U_BOX = (0.1, 2.0)
JET_BOX = (-2.0, 2.0)  # u_x, u_xx, u_xxx
X_BOX = (-2.0, 2.0)
NONCLASSICAL_X_BOX = (0.2, 2.5)
NONCLASSICAL_T_BOX = (0.0, 1.0)

# Method of lines
MOL_RTOL = float(os.getenv("NWS_MOL_RTOL", "1e-9"))
MOL_ATOL = float(os.getenv("NWS_MOL_ATOL", "1e-11"))
MOL_MIN_STEP = 1e-12
MOL_MAX_STEPS = int(os.getenv("NWS_MOL_MAX_STEPS", "2000000"))
# simulate: accepted max-abs error on the finest grid and observed-order band
MOL_ERROR_TOL = float(os.getenv("NWS_MOL_ERROR_TOL", "1e-3"))
MOL_ORDER_RANGE = (1.7, 2.3)

# Acceptance runner
MAX_WORKERS = int(os.getenv("NWS_MAX_WORKERS", "4"))
RESIDUAL_TOL = 1e-8
