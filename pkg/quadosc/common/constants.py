"""Shared numerical constants and defaults."""

# Integrator defaults
DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
DEFAULT_MAX_STEPS = 2_000_000
DEFAULT_METHOD = "DOP853"  # 8(5,3) Dormand-Prince; "RK45" is the 5(4) pair
SUPPORTED_METHODS = ("DOP853", "RK45")

# Finite differences: h = max(FD_MIN_STEP, FD_REL_STEP * |t|), five-point stencil
FD_MIN_STEP = 1e-3
FD_REL_STEP = 1e-3

# Singularity guards
RICCATI_POLE_THRESHOLD = 1e8  # |c1| beyond this is treated as a pole
RHO_FLOOR = 1e-150  # rho (or sigma) at or below this aborts the run

# Closed-form phase quadrature
DEFAULT_QUAD_TOL = 1e-10
QUAD_SUBDIVISION_LIMIT = 200
QUAD_ACCEPT_REL = 1e-8  # a flagged panel is kept if its error estimate is this small relative to it

# Validation defaults (ode, wronskian, fluctuations, omega consistency)
TOL_ODE = 1e-6
TOL_WRONSKIAN = 1e-8
TOL_FLUCT = 1e-6
TOL_OMEGA = 1e-10
TOL_SATURATION = 1e-12
STRICT_FACTOR = 0.01

# Units
DEFAULT_HBAR = 1.0
DEFAULT_M0_OMEGA0 = 1.0

# Wronskian of a normalized solution
NORMALIZED_WRONSKIAN = 2j
