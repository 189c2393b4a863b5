"""Basic QuantumConvex settings."""


# IMPORTS ---
# Python imports
import os


# Simulation preferences ---
STATEVECTOR_BUDGET = 2 ** 22  # Max amplitudes a PhaseState may hold.
STATEVECTOR_BUDGET_ENV = "QUANTUM_CONVEX_STATEVECTOR_BUDGET"  # Overrides the budget.


# Geometry preferences ---
BOUNDARY_TOLERANCE = 1e-9  # Boundary classification slack when precision is 0.
UNIT_NORM_TOLERANCE = 1e-12  # Allowed deviation of a Halfspace normal from norm 1.
STATE_NORM_TOLERANCE = 1e-10  # Allowed deviation of a PhaseState from norm 1.


# Optimization preferences ---
ELLIPSOID_MAX_ITERATIONS = 20000  # Cap for the cutting-plane driver.
HEIGHT_SEARCH_PRECISION = 1e-10  # Default binary-search resolution for h_p.
CLASSICAL_SEPARATION_RADIUS = 1e-4  # r1 of the classical separation, relative to r.
QUANTUM_SEPARATION_RADIUS = 1e-2  # r1 of the quantum separation, relative to r.
QUANTUM_SEPARATION_ATTEMPTS = 3  # Subgradient estimates before a zero result gives up.
SEPARATION_SWEEP_BUDGET = 2 ** 14  # Max raw h_p evaluations of one quantum separation.
HEIGHT_RESOLUTION_ULPS = 100  # Smallest bisection step of h_p, in ulps of the bracket end.


# Experiment preferences ---
DEFAULT_SEED = 20190101  # Seed used when the user gives none.
DEFAULT_TRIALS = 100  # Trials per run of the experiment harness.
ARTIFACT_VERSION = "1.0.0"  # Written into every CSV header.


def statevector_budget():
    """Get the number of amplitudes a simulated state may hold.

    Note:
        The environment variable named by STATEVECTOR_BUDGET_ENV takes
        precedence over STATEVECTOR_BUDGET. It is read on every call, so
        tests and the CLI can change it at runtime.

    Returns:
        int: Maximum number of complex amplitudes.
    """
    override = os.environ.get(STATEVECTOR_BUDGET_ENV)
    if override:
        return int(override)
    return STATEVECTOR_BUDGET
