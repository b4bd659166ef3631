'''
    Contains Settings for this project
'''
from pathlib import Path


BASE_DIR = Path(__file__).resolve().parent.parent

# Directory path for storing log files
LOG_DIRECTORY_PATH = BASE_DIR / 'log'

# Reports are written here unless BIHARMONIC_REPORT_DIR is set
REPORT_DIR_ENV_VAR = 'BIHARMONIC_REPORT_DIR'
DEFAULT_REPORT_DIRECTORY_PATH = BASE_DIR.parent / 'reports'
REPORT_SCHEMA_VERSION = '1'

DEFAULT_SEED = 7


# Finite difference stencils
STENCIL_STEP = 1e-3
STENCIL_ORDER = 4
# smallest step a stencil may shrink to near a boundary or a singular point
STENCIL_MIN_STEP = 1e-6


# Quadrature
QUADRATURE_TARGET_TOL = 1e-6
QUADRATURE_MAX_REFINEMENTS = 4
QUADRATURE_RADIAL_NODES = 16
QUADRATURE_SPHERE_ORDER = 8
QUADRATURE_WORKERS = 1
# hard cap for the automatic truncation radius of half-space integrals
QUADRATURE_MAX_RADIUS = 1e12
# number of nodes handed to one worker per reduction step
QUADRATURE_CHUNK_SIZE = 65536


# Boundary limits (t -> 0 extrapolation)
LIMIT_T0 = 0.1
LIMIT_LEVELS = 5


# ODE integration
ODE_RTOL = 1e-10
ODE_ATOL = 1e-10
ODE_BLOWUP_BOUND = 1e8
ODE_METHOD = 'DOP853'
SCAN_BISECTION_WIDTH = 1e-8
SCAN_CEILING_FACTOR = 10.0


# Points closer than this to -e_{n+1} are rejected
SINGULAR_POINT_MARGIN = 1e-8


if __name__ == '__main__':
    pass
