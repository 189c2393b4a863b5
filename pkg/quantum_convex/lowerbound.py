"""Executable lower-bound constructions.

Note:
    Hard instances hide a bit string. Each instance comes with a reduction
    that answers every convex-optimization query with (at most) one query of
    the wildcard model Q_s(T, y) = [s restricted to T equals y]:

    * Sum of coordinates: minimize sum(x) over C_s = prod [s_i - 2, s_i + 1].
      One membership query costs one wildcard query.
    * Max-norm: minimize f_c(x) = max_i |pi(x_i) - c_i| + sum_i |pi(x_i) - x_i|
      with pi the projection onto [0, 1]. A decision "f_c(x) <= t" costs one
      wildcard query; an evaluation to b bits costs b decisions.
    * Discretization: an exact evaluation of f_c at any x in [0, 1]^n costs
      one low-precision evaluation at a point of the finite set D_n.

    Coordinates and index sets are 0-based. Permutations handed to chi are
    ranks 1..n, as in the definition of D_n.

Example:
    ::

        import quantum_convex as qc

        instance = qc.lowerbound.WildcardInstance([1, 0, 1])
        qc.lowerbound.wildcard_query(instance, [0, 2], [1, 1])  # 1
        qc.lowerbound.classical_wildcard_driver(instance)  # array([1, 0, 1])
        instance.query_count  # 4
"""


# IMPORTS ---
# Python imports
import itertools
import threading

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import oracles
from quantum_convex import tracer


# CONSTANTS ---
WILDCARD = "wildcard"
SUM_COORDS_THRESHOLD = -1.5  # Rounds s_i - 2 back to s_i.
MAX_NORM_THRESHOLD = 0.5  # Rounds a point near c back to c.
PROBE_TOLERANCE = 1e-9


def _bits(values, name="bit string"):
    bits = np.asarray(values, dtype=np.int64).reshape(-1)
    if not np.all((bits == 0) | (bits == 1)):
        msg = "{0} must hold only 0 and 1, got {1}!".format(name, values)
        raise errors.ParamError(msg)
    return bits


# WILDCARDS ---
class WildcardInstance(object):
    """Hidden bit string s, queried through Q_s(T, y).

    Note:
        The query counter is guarded by a lock; it never decreases.
    """

    def __init__(self, hidden, label=WILDCARD):
        self.hidden = _bits(hidden, "Hidden string")
        self.label = label
        self._query_count = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return "WildcardInstance(n={0}, queries={1})".format(self.n, self.query_count)

    @classmethod
    def from_rng(cls, n, rng, label=WILDCARD):
        """Instance with a uniformly random hidden string of length n."""
        return cls(rng.integers(0, 2, size=n), label)

    @property
    def n(self):
        return self.hidden.size

    @property
    def query_count(self):
        with self._lock:
            return self._query_count

    def _count(self):
        with self._lock:
            self._query_count += 1


def wildcard_query(inst, T, y):
    """Q_s(T, y): 1 iff s restricted to T equals y.

    Args:
        inst (WildcardInstance): Instance holding s.
        T (iterable): Index set, a subset of range(n).
        y (iterable): Bits, one per index of T.

    Raises:
        ArityError: If |T| != |y| or T has indices outside range(n).

    Returns:
        int: 1 for a match, 0 otherwise. T = {} always matches.
    """
    T = np.asarray(list(T), dtype=np.int64)
    y = np.asarray(list(y), dtype=np.int64)
    if T.size != y.size:
        msg = "Wildcard query with |T|={0} but |y|={1}!".format(T.size, y.size)
        raise errors.ArityError(msg)

    if T.size and (T.min() < 0 or T.max() >= inst.n):
        msg = "Wildcard index set {0} leaves range({1})!".format(T.tolist(), inst.n)
        raise errors.ArityError(msg)

    answer = int(np.array_equal(inst.hidden[T], y))
    inst._count()
    LOG.debug("Q_s(%s, %s) -> %s", T.tolist(), y.tolist(), answer)
    tracer.record(WILDCARD, inst.label, answer)
    return answer


def classical_wildcard_driver(inst):
    """Recover s with n singleton queries Q_s({i}, 1).

    Note:
        This is the classical driver; quantum search with wildcards would
        need only O(sqrt(n) log n) queries.

    Returns:
        numpy.ndarray: The hidden string.
    """
    return np.array([wildcard_query(inst, [index], [1]) for index in range(inst.n)])


# SUM OF COORDINATES ---
def sum_coords_membership(inst, x):
    """Membership in C_s = prod [s_i - 2, s_i + 1] with one wildcard query.

    Note:
        Coordinates in [-2, -1) force s_i = 0, those in (1, 2] force s_i = 1,
        those in [-1, 1] fit either value and any other value fits none. No
        query is made in the last case.

    Args:
        inst (WildcardInstance): Instance holding s.
        x (iterable): Queried point.

    Returns:
        int: 1 if x is in C_s, 0 otherwise.
    """
    x = oracles.as_point(x, inst.n)
    forced_zero = (x >= -2.0) & (x < -1.0)
    forced_one = (x > 1.0) & (x <= 2.0)
    free = (x >= -1.0) & (x <= 1.0)
    if not np.all(forced_zero | forced_one | free):
        return 0

    T = np.flatnonzero(forced_zero | forced_one)
    return wildcard_query(inst, T, forced_one[T].astype(np.int64))


def sum_coords_body(inst):
    """C_s as a ConvexBody whose membership runs through the wildcard oracle.

    Note:
        The wildcard instance is kept as attribute "wildcard" of the body.
    """
    n = inst.n
    body = oracles.ConvexBody(
        name="sum_coords",
        dimension=n,
        membership_predicate=lambda x: bool(sum_coords_membership(inst, x)),
        inner_radius=1.5,
        outer_radius=1.5 * np.sqrt(n),
        center=inst.hidden - 0.5,
    )
    body.wildcard = inst
    return body


def smoothed_sum_coords_body(hidden):
    """The smoothed version SC_{s+1, 3} of C_s (exact geometry)."""
    hidden = _bits(hidden, "Hidden string")
    return oracles.smoothed_hypercube(hidden + 1.0, 3.0)


def sum_coords_objective(body):
    """f(x) = sum_i x_i, bounded over the given body."""
    objective = oracles.linear_objective(np.ones(body.dimension), body)
    objective.name = "sum_coords"
    return objective


def round_sgn(x, threshold):
    """Per-coordinate rounding: 0 where x_i < threshold, 1 elsewhere."""
    return (oracles.as_point(x) >= threshold).astype(np.int64)


# MAX-NORM ---
def project_unit(x):
    """pi(x): coordinate-wise projection onto [0, 1]."""
    return np.clip(oracles.as_point(x), 0.0, 1.0)


def projection_penalty(x):
    """sum_i |pi(x_i) - x_i|."""
    x = oracles.as_point(x)
    return float(np.sum(np.abs(project_unit(x) - x)))


def max_norm_eval(c, x):
    """f_c(x) = max_i |pi(x_i) - c_i| + sum_i |pi(x_i) - x_i|.

    Args:
        c (iterable): Hidden bits.
        x (iterable): Point in R^n.

    Returns:
        float: The exact value; 0 only at x = c.
    """
    c = _bits(c, "Hidden string")
    x = oracles.as_point(x, c.size)
    return float(np.max(np.abs(project_unit(x) - c))) + projection_penalty(x)


class MaxNormInstance(object):
    """Hidden bit string c with the max-norm function f_c.

    Note:
        Decisions "f_c(x) <= t" go through a wildcard instance over c, so
        its counter tracks the wildcard cost of every decision.
    """

    def __init__(self, hidden, label="max_norm"):
        self.hidden = _bits(hidden, "Hidden string")
        self.label = label
        self.wildcard = WildcardInstance(self.hidden, label)

    def __repr__(self):
        return "MaxNormInstance(n={0})".format(self.n)

    @classmethod
    def from_rng(cls, n, rng, label="max_norm"):
        return cls(rng.integers(0, 2, size=n), label)

    @property
    def n(self):
        return self.hidden.size

    def __call__(self, x):
        return max_norm_eval(self.hidden, x)

    def decision(self, x, t):
        """f_c(x) <= t for x in [0, 1]^n, by one wildcard query."""
        return max_norm_decision_via_wildcard(self.wildcard, x, t)

    def objective(self):
        """f_c as an ObjectiveFunction.

        Note:
            The bounds 0 <= f_c <= 1 hold on [0, 1]^n. The Lipschitz constant
            n + 1 is meant in the infinity-norm sense.
        """
        return oracles.ObjectiveFunction(
            name=self.label,
            dimension=self.n,
            evaluate=self,
            lipschitz=self.n + 1.0,
            lower_bound=0.0,
            upper_bound=1.0,
        )


def max_norm_decision_via_wildcard(inst, x, t):
    """Decide f_c(x) <= t with at most one wildcard query.

    Note:
        With J0 = [0, t] and J1 = [1 - t, 1], f_c(x) <= t iff x_i is in J_{c_i}
        for every i. Coordinates in J0 only force c_i = 0, those in J1 only
        force c_i = 1, those in both are free and those in neither make the
        answer 0 without a query.

    Args:
        inst (WildcardInstance): Instance holding c.
        x (iterable): Point in [0, 1]^n.
        t (float): Threshold in [0, 1].

    Raises:
        DomainError: If t or x leaves the unit interval.

    Returns:
        int: 1 if f_c(x) <= t, 0 otherwise.
    """
    if not 0.0 <= t <= 1.0:
        msg = "Decision threshold t={0} must lie in [0, 1]!".format(t)
        raise errors.DomainError(msg)

    x = oracles.as_point(x, inst.n)
    if np.any(x < 0.0) or np.any(x > 1.0):
        msg = "Decision point {0} must lie in [0, 1]^n; project it first!".format(x)
        raise errors.DomainError(msg)

    in_zero = x <= t
    in_one = x >= 1.0 - t
    if not np.all(in_zero | in_one):
        return 0

    forced_zero = in_zero & ~in_one
    forced_one = in_one & ~in_zero
    T = np.flatnonzero(forced_zero | forced_one)
    return wildcard_query(inst, T, forced_one[T].astype(np.int64))


def binary_search_eval(decision, x, bits):
    """Value of f in [0, 1] to precision 2^-bits from bits decision queries.

    Args:
        decision (function): (x, t) -> 1 if f(x) <= t else 0.
        x (iterable): Point to evaluate.
        bits (int): Number of decision queries, at least 1.

    Raises:
        ParamError: If bits < 1.

    Returns:
        float: Midpoint of the final dyadic interval.
    """
    if bits < 1:
        msg = "Binary search needs at least one bit, got {0}!".format(bits)
        raise errors.ParamError(msg)

    low, high = 0.0, 1.0
    for _ in range(bits):
        middle = (low + high) / 2.0
        if decision(x, middle):
            high = middle
        else:
            low = middle
    return (low + high) / 2.0


def max_norm_eval_via_wildcard(inst, x, bits):
    """f_c(x) on all of R^n to precision 2^-bits, using bits wildcard queries.

    Args:
        inst (MaxNormInstance): Instance holding c.
        x (iterable): Point in R^n.
        bits (int): Number of decision queries.

    Returns:
        float: Approximation of f_c(x).
    """
    projected = project_unit(x)
    value = binary_search_eval(inst.decision, projected, bits)
    return value + projection_penalty(x)


def _probe(evaluate, n, T, y):
    """One wildcard query Q_c(T, y) answered by one evaluation of f_c."""
    point = np.full(n, 0.5)
    point[list(T)] = y
    value = evaluate(point)
    for legal in (0.0, 0.5, 1.0):
        if abs(value - legal) <= PROBE_TOLERANCE:
            return int(legal < 1.0)

    msg = "Probe {0} got f={1}, expected one of 0, 1/2, 1!".format(point, value)
    raise errors.ContractViolation(msg)


def solve_max_norm_via_wildcards(oracle, n=None):
    """Recover c from an exact evaluation oracle of f_c.

    Note:
        The probe x^(T, y) is 1/2 off T and y on T. f_c(x^(T, y)) is 0 or 1/2
        if c matches y on T and 1 otherwise. The classical driver probes the
        n singletons T = {i} with y = 1.

    Args:
        oracle (CountedOracle or function): Evaluation oracle of f_c.
        n (int): Length of c. Taken from the oracle when omitted.

    Raises:
        ContractViolation: If a probe value is not 0, 1/2 or 1.

    Returns:
        tuple(numpy.ndarray, int): The recovered bits c and the number of
            evaluation queries spent on them, which is always n. Callers
            unpack both, e.g. c, queries = solve_max_norm_via_wildcards(f).
    """
    if isinstance(oracle, oracles.CountedOracle):
        n = oracle.dimension

        def evaluate(point):
            return oracles.query_evaluation(oracle, point)
    else:
        evaluate = oracle

    bits = np.array([_probe(evaluate, n, [index], [1]) for index in range(n)])
    return bits, n


# DISCRETIZATION ---
class DiscretizationTrace(object):
    """Intermediate record (b, sigma, x*, k*) of one discretized evaluation."""

    def __init__(self, b, sigma, x_star, k_star, value):
        self.b = b
        self.sigma = sigma
        self.x_star = x_star
        self.k_star = k_star
        self.value = value

    def __repr__(self):
        return "DiscretizationTrace(b={0}, sigma={1}, x*={2}, k*={3}, value={4})".format(
            self.b.tolist(), self.sigma.tolist(), self.x_star, self.k_star, self.value
        )


def ord_(x):
    """Order the 2n values {x_i, 1 - x_i} decreasingly.

    Note:
        Ties: equal values keep x_i entries before 1 - x_j entries, then the
        lower index first. The sorted list is a palindrome under v -> 1 - v,
        so its first n entries name every coordinate once.

    Args:
        x (iterable): Point in [0, 1]^n.

    Returns:
        tuple: (b, sigma). sigma[k] is the coordinate of the k-th largest
            entry, b[i] is 1 if that entry is x_i and 0 if it is 1 - x_i.
    """
    x = oracles.as_point(x)
    entries = [(-value, 0, index) for index, value in enumerate(x)]
    entries += [(-(1.0 - value), 1, index) for index, value in enumerate(x)]
    entries.sort()

    n = x.size
    b = np.zeros(n, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.int64)
    for position, (_, kind, index) in enumerate(entries[:n]):
        sigma[position] = index
        b[index] = 1 - kind
    return b, sigma


def chi(a, perm):
    """The point of D_n with bits a and permutation perm.

    Note:
        Coordinate i is perm[i]/(2n+1) if a_i = 0 and 1 - perm[i]/(2n+1) if
        a_i = 1, where perm holds the ranks 1..n.

    Args:
        a (iterable): Bits.
        perm (iterable): Permutation of 1..n.

    Raises:
        ParamError: If perm is not a permutation of 1..n.

    Returns:
        numpy.ndarray: The point.
    """
    a = _bits(a)
    perm = np.asarray(perm, dtype=np.int64)
    n = a.size
    if sorted(perm.tolist()) != list(range(1, n + 1)):
        msg = "{0} is no permutation of 1..{1}!".format(perm.tolist(), n)
        raise errors.ParamError(msg)

    fractions = perm / (2.0 * n + 1.0)
    return (1 - a) * fractions + a * (1.0 - fractions)


def inverse_ranks(sigma):
    """sigma^-1 as ranks 1..n: the position of every coordinate in sigma."""
    ranks = np.empty_like(sigma)
    ranks[sigma] = np.arange(1, sigma.size + 1)
    return ranks


def discrete_set(n):
    """All 2^n n! points of D_n."""
    points = []
    for a in itertools.product((0, 1), repeat=n):
        for perm in itertools.permutations(range(1, n + 1)):
            points.append(chi(a, perm))
    return np.array(points)


def _entry(b, x, index):
    """b_i x_i + (1 - b_i)(1 - x_i)."""
    return b[index] * x[index] + (1 - b[index]) * (1.0 - x[index])


def discretize(x, oracle):
    """Run the discretization and keep its intermediate values.

    Args:
        x (iterable): Point in [0, 1]^n.
        oracle (CountedOracle or function): Evaluates f_c with error at
            most 1/(5n).

    Raises:
        ContractViolation: If the rounded k* leaves 1..n+1.

    Returns:
        DiscretizationTrace: The trace; its value is f_c(x).
    """
    x = oracles.as_point(x)
    n = x.size
    b, sigma = ord_(x)
    x_star = chi(b, inverse_ranks(sigma))

    if isinstance(oracle, oracles.CountedOracle):
        estimate = oracles.query_evaluation(oracle, x_star)
    else:
        estimate = float(oracle(x_star))

    k_star = int(np.rint((2 * n + 1) * (1.0 - estimate)))
    if not 1 <= k_star <= n + 1:
        msg = "f({0}) = {1} gives k*={2} outside 1..{3}; oracle is off contract!".format(
            x_star, estimate, k_star, n + 1
        )
        raise errors.ContractViolation(msg)

    if k_star == n + 1:
        value = 1.0 - _entry(b, x, sigma[n - 1])
    else:
        value = _entry(b, x, sigma[k_star - 1])

    return DiscretizationTrace(b, sigma, x_star, k_star, float(value))


def discretized_eval(x, oracle):
    """Exact f_c(x) from one low-precision evaluation at a point of D_n.

    Note:
        One oracle call is counted. A quantum caller pays two queries, one to
        compute the value and one to uncompute it.
    """
    return discretize(x, oracle).value


# COMBINED INSTANCE ---
def combined_instance(s, c):
    """2n-dimensional instance hiding s in the body and c in the objective.

    Note:
        The body is C_s x [0, 1]^n; membership costs one wildcard query on s.
        The objective is sum(x[:n]) + f_c(x[n:]). Its minimizer is
        (s - 2, c) with value sum(s_i - 2).

    Args:
        s (iterable): Bits hidden in the body.
        c (iterable): Bits hidden in the objective.

    Raises:
        ParamError: If s and c differ in length.

    Returns:
        tuple: (membership oracle, evaluation oracle), both CountedOracle.
    """
    s = _bits(s, "Hidden body string")
    c = _bits(c, "Hidden objective string")
    if s.size != c.size:
        msg = "Combined instance needs |s| = |c|, got {0} and {1}!".format(s.size, c.size)
        raise errors.ParamError(msg)

    n = s.size
    body_instance = WildcardInstance(s, "combined_body")
    tolerance = config.BOUNDARY_TOLERANCE

    def predicate(x):
        cube = x[n:]
        if np.any(cube < -tolerance) or np.any(cube > 1.0 + tolerance):
            return False
        return bool(sum_coords_membership(body_instance, x[:n]))

    body = oracles.ConvexBody(
        name="combined",
        dimension=2 * n,
        membership_predicate=predicate,
        inner_radius=0.5,
        outer_radius=np.sqrt(n * 1.5 ** 2 + n * 0.5 ** 2),
        center=np.concatenate([s - 0.5, np.full(n, 0.5)]),
    )
    body.wildcard = body_instance

    objective = oracles.ObjectiveFunction(
        name="combined",
        dimension=2 * n,
        evaluate=lambda x: float(np.sum(x[:n])) + max_norm_eval(c, x[n:]),
        lipschitz=2.0 * n + 1.0,
        lower_bound=float(np.sum(s - 2)),
        upper_bound=float(np.sum(s + 1)) + 1.0,
    )
    return oracles.CountedOracle(body), oracles.CountedOracle(objective)


def recover_combined(point, n):
    """Round a near-optimal point of the combined instance back to (s, c)."""
    point = oracles.as_point(point, 2 * n)
    return round_sgn(point[:n], SUM_COORDS_THRESHOLD), round_sgn(point[n:], MAX_NORM_THRESHOLD)
