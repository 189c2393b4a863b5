"""Randomized quantum subgradients of nonsmooth convex functions.

Note:
    The quantum subgradient samples a point y from a fine grid around x and
    runs the smooth gradient estimator at y, pretending f is beta-smooth for
    an effective beta = 2 n^(1/3) L / (r1^(2/3) eps^(1/3)). For most grid
    points f really is nearly linear on the tiny estimation grid, so the
    pretence only fails with small probability.

    The module also holds the classical finite-difference baseline and the
    diagnostics used to check the approximate subgradient inequality.
"""


# IMPORTS ---
# Python imports
import itertools
import math

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import errors
from quantum_convex import oracles
from quantum_convex import qgrad


# CONSTANTS ---
EXPECTED_ERROR_CONSTANT = 5000.0


class SubgradientResult(object):
    """Outcome of one quantum subgradient computation.

    Attributes:
        gradient (numpy.ndarray): The estimate g-tilde, |g_i| <= L.
        sampled_center (numpy.ndarray): Grid point y the estimate was taken at.
        r1 (float): Approximation scale.
        effective_beta (float): Smoothness passed to the gradient estimator.
        logical_queries (int): Phase queries issued.
        raw_queries (int): Evaluation calls the simulation needed.
    """

    def __init__(self, gradient, sampled_center, r1, effective_beta, logical_queries, raw_queries):
        self.gradient = gradient
        self.sampled_center = sampled_center
        self.r1 = r1
        self.effective_beta = effective_beta
        self.logical_queries = logical_queries
        self.raw_queries = raw_queries

    def __repr__(self):
        return "SubgradientResult(g={0}, y={1}, logical={2}, raw={3})".format(
            self.gradient, self.sampled_center, self.logical_queries, self.raw_queries
        )


def effective_smoothness(n, lipschitz, r1, epsilon):
    """beta used for the smooth estimator: 2 n^(1/3) L / (r1^(2/3) eps^(1/3))."""
    return 2.0 * n ** (1.0 / 3) * lipschitz / (r1 ** (2.0 / 3) * epsilon ** (1.0 / 3))


def expected_error_ceiling(n, lipschitz, r1, epsilon):
    """Bound 5000 L n^(5/3) eps^(1/3) / r1^(1/3) on the expected certificate violation."""
    return (
        EXPECTED_ERROR_CONSTANT * lipschitz * n ** (5.0 / 3)
        * epsilon ** (1.0 / 3) / r1 ** (1.0 / 3)
    )


def grid_sample(x, r1, l, rng):
    """Uniformly random node of the grid {x - r1 + l k} inside B_inf(x, r1).

    Args:
        x (iterable): Center of the box.
        r1 (float): Half side length of the box.
        l (float): Grid spacing.
        rng (numpy.random.Generator): Seeded generator.

    Raises:
        DegenerateGrid: If l > 2 r1.

    Returns:
        numpy.ndarray: The sampled node y, ||y - x||_inf <= r1.
    """
    x = oracles.as_point(x)
    if l > 2.0 * r1:
        msg = "Grid spacing l={0} doesn't fit into a box of side 2*r1={1}!".format(
            l, 2.0 * r1
        )
        raise errors.DegenerateGrid(msg)

    steps = int(math.floor(2.0 * r1 / l + 1e-9))
    indices = rng.integers(0, steps + 1, size=x.size)
    return x - r1 + l * indices


def quantum_subgradient(f, epsilon, lipschitz, x, r1, rng):
    """Approximate subgradient of a convex, L-Lipschitz f at x.

    Args:
        f (CountedOracle): Evaluation oracle with precision <= eps.
        epsilon (float): Evaluation error; eps < min(1, r1/n^2).
        lipschitz (float): Lipschitz bound L.
        x (iterable): Point of the subgradient.
        r1 (float): Approximation scale.
        rng (numpy.random.Generator): Seeded generator.

    Raises:
        ParamError: If eps >= min(1, r1/n^2).
        ParamsInfeasible: If the effective beta admits no register width.

    Returns:
        SubgradientResult: The estimate with full query accounting.
    """
    n = f.dimension
    if not epsilon < min(1.0, r1 / n ** 2):
        msg = "Subgradient needs eps < min(1, r1/n^2) = {0}, got eps={1}!".format(
            min(1.0, r1 / n ** 2), epsilon
        )
        raise errors.ParamError(msg)

    beta = effective_smoothness(n, lipschitz, r1, epsilon)
    params = qgrad.derive_grad_params(n, lipschitz, beta, epsilon)
    y = grid_sample(x, r1, params.l, rng)

    logical_before = f.phase_query_count
    raw_before = f.query_count
    gradient = qgrad.smooth_quantum_gradient(f, epsilon, lipschitz, beta, y, rng)

    result = SubgradientResult(
        gradient=gradient,
        sampled_center=y,
        r1=r1,
        effective_beta=beta,
        logical_queries=f.phase_query_count - logical_before,
        raw_queries=f.query_count - raw_before,
    )
    LOG.debug("Quantum subgradient at %s: %s", x, result)
    return result


def _value(f, x):
    """Exact value for diagnostics; accepts plain callables too."""
    if isinstance(f, oracles.CountedOracle):
        return oracles.query_evaluation(f, x)
    return float(f(x))


def subgradient_certificate_check(f, x, gradient, r1, lipschitz, q_samples):
    """Smallest zeta >= 0 making the approximate subgradient inequality hold.

    Note:
        The inequality is
        f(q) >= f(x) + <g, q - x> - zeta ||q - x||_inf - 4 n r1 L
        for every sampled q. Samples equal to x are skipped.

    Args:
        f (function): Exact objective (ObjectiveFunction or callable).
        x (iterable): Point of the subgradient.
        gradient (iterable): Candidate subgradient g.
        r1 (float): Approximation scale.
        lipschitz (float): Lipschitz bound L.
        q_samples (iterable): Probe points.

    Returns:
        float: The worst violation zeta-hat.
    """
    x = oracles.as_point(x)
    gradient = oracles.as_point(gradient, x.size)
    slack = 4.0 * x.size * r1 * lipschitz
    f_x = _value(f, x)

    worst = 0.0
    for q in q_samples:
        q = oracles.as_point(q, x.size)
        distance = float(np.max(np.abs(q - x)))
        if distance == 0:
            continue
        excess = f_x + float(np.dot(gradient, q - x)) - slack - _value(f, q)
        worst = max(worst, max(excess, 0.0) / distance)
    return worst


def deviation_from_linearity(f, grad_f, y, z):
    """Delta(y, z) = |f(z) - f(y) - <grad f(y), z - y>|."""
    y = oracles.as_point(y)
    z = oracles.as_point(z, y.size)
    linear = f(y) + float(np.dot(grad_f(y), z - y))
    return abs(f(z) - linear)


def max_corner_deviation(f, grad_f, y, l):
    """Largest Delta(y, z) over the 2^n corners z of B_inf(y, l).

    Note:
        For convex f the deviation from linearity is convex in z, so on the
        cube it peaks at a corner.
    """
    y = oracles.as_point(y)
    worst = 0.0
    for signs in itertools.product((-1.0, 1.0), repeat=y.size):
        corner = y + l * np.array(signs)
        worst = max(worst, deviation_from_linearity(f, grad_f, y, corner))
    return worst


def finite_difference_gradient(f, x, h):
    """Forward-difference gradient with exactly n + 1 evaluation queries.

    Args:
        f (CountedOracle): Evaluation oracle.
        x (iterable): Point of the gradient.
        h (float): Step size.

    Raises:
        ParamError: If h is not positive.

    Returns:
        numpy.ndarray: (f(x + h e_i) - f(x)) / h per coordinate.
    """
    if h <= 0:
        msg = "Finite differences need h > 0, got {0}!".format(h)
        raise errors.ParamError(msg)

    x = oracles.as_point(x, f.dimension)
    base = oracles.query_evaluation(f, x)
    gradient = np.empty(x.size)
    for index in range(x.size):
        shifted = x.copy()
        shifted[index] += h
        gradient[index] = (oracles.query_evaluation(f, shifted) - base) / h
    return gradient


def classical_query_lower_bound(n, epsilon, delta):
    """Information bound n log(1/eps) / log(1/delta) on classical evaluation queries."""
    return n * math.log(1.0 / epsilon) / math.log(1.0 / delta)


def query_separation_table(dimensions, epsilon, lipschitz, r1, measured=None, delta=None):
    """Logical quantum queries versus classical query counts, per dimension.

    Args:
        dimensions (iterable): Dimensions n to tabulate.
        epsilon (float): Evaluation error.
        lipschitz (float): Lipschitz bound L.
        r1 (float): Approximation scale.
        measured (dict): Optional {n: measured phase queries per subgradient}.
        delta (float): Precision of classical answers for the information
            bound. Defaults to epsilon.

    Returns:
        list: Rows (n, quantum_queries, finite_difference_queries,
            information_bound, source) where source is "measured" or
            "formula".
    """
    measured = measured or {}
    delta = epsilon if delta is None else delta
    rows = []
    for n in dimensions:
        if n in measured:
            quantum, source = measured[n], "measured"
        else:
            beta = effective_smoothness(n, lipschitz, r1, epsilon)
            quantum, source = qgrad.repetitions_for(n, lipschitz, beta, epsilon), "formula"
        bound = classical_query_lower_bound(n, epsilon, delta)
        rows.append((n, quantum, n + 1, bound, source))
    return rows
