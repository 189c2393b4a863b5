"""Static tables used by the QuantumConvex experiment harness."""


# IMPORTS ---
# Local imports
from quantum_convex import config


# GLOBALS ---
EXIT_CODES = {
    "success": 0,
    "usage": 2,
    "no_convergence": 3,
    "contract_violation": 4,
}


# Settings every subcommand understands. Values of None are resolved from
# the instance (e.g. the evaluation point defaults to the body center).
COMMON_DEFAULTS = {
    "seed": config.DEFAULT_SEED,
    "trials": config.DEFAULT_TRIALS,
    "out": None,
    "workers": 1,
    "instance": {},
}


COMMAND_DEFAULTS = {
    "gradest": {
        "instance": {"family": "quadratic", "n": 1},
        "trials": 300,
        "epsilon": None,  # Derived from "bits" when not given.
        "bits": 3,
        "beta": None,  # Taken from the objective when not given.
        "lipschitz": None,
        "point": None,
        "smooth": False,
    },
    "subgrad": {
        "instance": {"family": "abs_sum", "n": 1},
        "epsilon": 1e-9,
        "lipschitz": None,
        "r1": 1.0,
        "point": None,
        "q_points": 1000,
        "q_radius": 1.0,
        "table_dimensions": [1, 2, 3, 10, 100, 1000, 1000000],
    },
    "optimize": {
        "instance": {"family": "ball", "n": 2},
        "trials": 1,
        "epsilon": 1e-2,
        "separation": "classical",
        "delta": None,
        "rho": 0.2,
        "max_iterations": None,
    },
    "lowerbound": {
        "n": 2,
        "trials": 4,
        "reductions": ["wildcard", "sum_coords", "max_norm", "combined"],
        "hidden": None,
        "exhaustive": True,
        "epsilon": 1.0 / 3.0,
    },
    "discretize": {
        "n": 3,
        "trials": 1000,
        "hidden": None,
        "noise": None,  # 1/(5n+2) when not given.
        "noise_kind": "additive",
    },
}


CSV_COLUMNS = {
    "gradest": (
        "trial",
        "coordinate",
        "estimate",
        "gradient",
        "error",
        "failed",
    ),
    "subgrad": (
        "trial",
        "zeta",
        "ceiling",
        "logical_queries",
        "raw_queries",
        "baseline_zeta",
        "baseline_queries",
    ),
    "optimize": (
        "trial",
        "value",
        "optimum",
        "error",
        "lower_bound",
        "iterations",
        "separation_queries",
        "membership_queries",
        "evaluation_queries",
        "converged",
        "point",
    ),
    "lowerbound": (
        "reduction",
        "hidden",
        "recovered",
        "match",
        "membership_queries",
        "evaluation_queries",
        "wildcard_queries",
    ),
    "discretize": (
        "hidden",
        "checks",
        "mismatches",
        "max_error",
        "queries",
    ),
    "separation_table": (
        "n",
        "quantum_queries",
        "finite_difference_queries",
        "information_bound",
        "source",
    ),
}


# Noise policies selectable by name in the discretize subcommand.
NOISE_KINDS = {
    "exact": "exact",
    "additive": "additive",
    "round": "round_to_grid",
}
