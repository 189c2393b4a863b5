"""Exact desk-scale simulation of quantum convex optimization.

The package simulates QFT-based gradient estimation, randomized quantum
subgradients and the membership -> separation -> optimization reductions,
plus an executable testbed for the lower-bound constructions (wildcard
reductions, sum-of-coordinates, max-norm and discretization).

Example:
    ::

        import numpy as np
        import quantum_convex as qc

        rng = np.random.default_rng(7)
        body = qc.oracles.ball(2)
        objective = qc.oracles.linear_objective([1.0, 0.0], body)
        report = qc.reductions.minimize_convex(body, objective, 1e-2, rng)
        print(report.value)
"""

# IMPORTS ---
# Local imports
from quantum_convex import logger


__version__ = "1.0.0"


# SETUP LOGGER ---
logger.clear_handlers()
logger.setup_stream_handler(level=logger.logging.WARN)
LOG = logger.log


# These imports must come after LOG exists; the modules import it.
from quantum_convex.tracer import Tracer  # noqa: E402
from quantum_convex import errors  # noqa: E402
from quantum_convex import oracles  # noqa: E402
from quantum_convex import qgrad  # noqa: E402
from quantum_convex import subgrad  # noqa: E402
from quantum_convex import reductions  # noqa: E402
from quantum_convex import lowerbound  # noqa: E402
from quantum_convex import families  # noqa: E402
