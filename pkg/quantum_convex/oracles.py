"""Convex bodies, objective functions and the query-counted oracle layer.

:version: 1.0.0


Note:
    In any comment/docString of QuantumConvex I use this convention:

    * body: A ConvexBody K with B2(center, r) in K in B2(center, R).
    * objective: An ObjectiveFunction f with known bounds m <= f <= M.
    * oracle: A CountedOracle; the only way algorithms touch a body or an
      objective. Every answer is counted and (when tracing) recorded.
    * precision: The delta of an oracle. Membership answers may be wrong
      inside the delta-shell around the boundary; evaluation answers may be
      off by at most delta.

Example:
    ::

        import quantum_convex as qc

        square = qc.oracles.box([0, 0], [1, 1])
        oracle = qc.oracles.CountedOracle(square, precision=0.1)
        qc.oracles.query_membership(oracle, [1.05, 0.5])  # False (exact)
        oracle.query_count  # 1
"""


# IMPORTS ---
# Python imports
import collections
import itertools
import threading

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import tracer


# CONSTANTS ---
MEMBERSHIP = "membership"
EVALUATION = "evaluation"
PHASE = "phase"
BOUNDARY_TOLERANCE = config.BOUNDARY_TOLERANCE


# HELPERS ---
def as_point(x, dimension=None):
    """Turn x into a finite float vector of the expected dimension.

    Args:
        x (iterable or number): Coordinates of the point.
        dimension (int): Expected number of coordinates, None to skip check.

    Raises:
        InvalidPoint: If x has non-finite coordinates or a wrong dimension.

    Returns:
        numpy.ndarray: 1D float64 copy of x.
    """
    try:
        point = np.array(x, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError):
        msg = "Can't interpret {0} as a point!".format(x)
        raise errors.InvalidPoint(msg)

    if dimension is not None and point.size != dimension:
        msg = "Point {0} has {1} coordinates, expected {2}!".format(
            x, point.size, dimension
        )
        raise errors.InvalidPoint(msg)

    if not np.all(np.isfinite(point)):
        msg = "Point {0} has non-finite coordinates!".format(x)
        raise errors.InvalidPoint(msg)

    return point


def box_signed_distance(point, lower, upper):
    """Signed Euclidean distance of a point to an axis-aligned box.

    Args:
        point (numpy.ndarray): Queried point.
        lower (numpy.ndarray): Lower corner of the box.
        upper (numpy.ndarray): Upper corner of the box.

    Returns:
        float: Distance to the box if outside, minus the distance to the
            box boundary if inside.
    """
    center = (lower + upper) / 2.0
    half_widths = (upper - lower) / 2.0
    q = np.abs(point - center) - half_widths
    outside = np.linalg.norm(np.maximum(q, 0.0))
    inside = min(float(np.max(q)), 0.0)
    return float(outside + inside)


# BODIES AND OBJECTIVES ---
class ConvexBody(object):
    """A convex body K given by an exact membership predicate.

    Note:
        The body promises B2(center, r) in K in B2(center, R). The optional
        signed distance (positive outside, negative inside) makes the
        delta-shell of the membership contract decidable; bodies without one
        always get exact membership answers.
    """

    def __init__(
            self,
            name,
            dimension,
            membership_predicate,
            inner_radius,
            outer_radius,
            center=None,
            signed_distance=None):
        """ConvexBody-class constructor.

        Args:
            name (str): Human readable name, used in traces and CSV rows.
            dimension (int): Dimension n of the ambient space.
            membership_predicate (function): point -> bool, exact geometry.
            inner_radius (float): Radius r of a ball around center inside K.
            outer_radius (float): Radius R of a ball around center holding K.
            center (iterable): Center of both balls. Defaults to the origin.
            signed_distance (function): Optional point -> float.

        Raises:
            ParamError: If the radii or dimension are not admissible.
        """
        if dimension < 1:
            msg = "Body {0} needs a positive dimension, got {1}!".format(
                name, dimension
            )
            raise errors.ParamError(msg)

        if not 0 < inner_radius <= outer_radius:
            msg = "Body {0} needs 0 < r <= R, got r={1}, R={2}!".format(
                name, inner_radius, outer_radius
            )
            raise errors.ParamError(msg)

        self.name = name
        self.dimension = int(dimension)
        self.membership_predicate = membership_predicate
        self.inner_radius = float(inner_radius)
        self.outer_radius = float(outer_radius)
        if center is None:
            center = np.zeros(self.dimension)
        self.center = as_point(center, self.dimension)
        self.signed_distance = signed_distance

    def __repr__(self):
        return "ConvexBody({0}, n={1}, r={2}, R={3})".format(
            self.name, self.dimension, self.inner_radius, self.outer_radius
        )

    @property
    def kappa(self):
        """Condition number R/r of the body (always >= 1)."""
        return self.outer_radius / self.inner_radius

    def contains(self, x):
        """Exact (uncounted) membership test.

        Args:
            x (iterable): Point to test.

        Returns:
            bool: True if x lies in K.
        """
        return bool(self.membership_predicate(as_point(x, self.dimension)))

    def check_containment(self, rng, samples=1000):
        """Verify B2(center, r) in K in B2(center, R) by rejection sampling.

        Args:
            rng (numpy.random.Generator): Source of randomness.
            samples (int): Number of samples for each of the two checks.

        Returns:
            bool: True if no sample contradicts the containment chain.
        """
        n = self.dimension
        radius = self.inner_radius * (1.0 - 1e-9)
        for point in sample_ball(rng, self.center, radius, samples):
            if not self.contains(point):
                LOG.warning("%s: %s is in B2(c, r) but not in K", self, point)
                return False

        spread = 1.5 * self.outer_radius
        boxed = rng.uniform(-spread, spread, size=(samples, n)) + self.center
        for point in boxed:
            distance = np.linalg.norm(point - self.center)
            if distance > self.outer_radius + BOUNDARY_TOLERANCE:
                if self.contains(point):
                    LOG.warning("%s: %s is in K but not in B2(c, R)", self, point)
                    return False

        return True


class ObjectiveFunction(object):
    """A function f with Lipschitz constant L and bounds m <= f <= M.

    Note:
        The Lipschitz constant is meant in the infinity-norm sense:
        |f(y) - f(x)| <= L * max_i |y_i - x_i|.
    """

    def __init__(
            self,
            name,
            dimension,
            evaluate,
            lipschitz,
            lower_bound,
            upper_bound,
            gradient=None,
            domain=None,
            smoothness=None):
        """ObjectiveFunction-class constructor.

        Args:
            name (str): Human readable name, used in traces and CSV rows.
            dimension (int): Dimension n of the domain.
            evaluate (function): point -> float, exact value.
            lipschitz (float): Lipschitz constant L (infinity-norm sense).
            lower_bound (float): m, a lower bound of f on its domain.
            upper_bound (float): M, an upper bound of f on its domain.
            gradient (function): Optional point -> vector. Diagnostics only.
            domain (function): Optional point -> bool. None means all of R^n.
            smoothness (float): Optional smoothness constant beta.

        Raises:
            ParamError: If L is not positive or m > M.
        """
        if lipschitz <= 0:
            msg = "Objective {0} needs L > 0, got {1}!".format(name, lipschitz)
            raise errors.ParamError(msg)

        if lower_bound > upper_bound:
            msg = "Objective {0} has m={1} > M={2}!".format(
                name, lower_bound, upper_bound
            )
            raise errors.ParamError(msg)

        self.name = name
        self.dimension = int(dimension)
        self.evaluate = evaluate
        self.lipschitz = float(lipschitz)
        self.lower_bound = float(lower_bound)
        self.upper_bound = float(upper_bound)
        self.gradient = gradient
        self.domain = domain
        self.smoothness = smoothness

    def __repr__(self):
        return "ObjectiveFunction({0}, n={1}, L={2})".format(
            self.name, self.dimension, self.lipschitz
        )

    def __call__(self, x):
        return float(self.evaluate(as_point(x, self.dimension)))

    def in_domain(self, x):
        """Check whether x lies in the declared domain of f."""
        if self.domain is None:
            return True
        return bool(self.domain(as_point(x, self.dimension)))

    def check_lipschitz(self, rng, samples=1000, center=None, radius=1.0):
        """Check the infinity-norm Lipschitz bound on random pairs.

        Args:
            rng (numpy.random.Generator): Source of randomness.
            samples (int): Number of sampled pairs.
            center (iterable): Center of the sampling box. Default is origin.
            radius (float): Half side length of the sampling box.

        Returns:
            bool: True if no sampled pair violates the bound.
        """
        n = self.dimension
        center = np.zeros(n) if center is None else as_point(center, n)
        xs = rng.uniform(-radius, radius, size=(samples, n)) + center
        ys = rng.uniform(-radius, radius, size=(samples, n)) + center
        for x, y in zip(xs, ys):
            if not (self.in_domain(x) and self.in_domain(y)):
                continue
            gap = abs(self(y) - self(x))
            bound = self.lipschitz * np.max(np.abs(y - x))
            if gap > bound + 1e-12:
                LOG.warning("%s: |f(%s) - f(%s)| = %s > %s", self, y, x, gap, bound)
                return False
        return True


# NOISE POLICIES ---
class NoisePolicy(object):
    """Deterministic error model of an evaluation oracle.

    Note:
        Use the classmethods to create instances:

        * exact(): Answers f(x).
        * round_to_grid(step): Answers f(x) rounded to a multiple of step.
        * additive(offset): Answers f(x) + offset.
    """

    EXACT = "exact"
    ROUND_TO_GRID = "round_to_grid"
    ADDITIVE = "additive"

    def __init__(self, kind, parameter=0.0):
        if kind not in (self.EXACT, self.ROUND_TO_GRID, self.ADDITIVE):
            msg = "Unknown noise policy {0}!".format(kind)
            raise errors.ParamError(msg)

        if kind == self.ROUND_TO_GRID and parameter <= 0:
            msg = "Rounding step must be positive, got {0}!".format(parameter)
            raise errors.ParamError(msg)

        self.kind = kind
        self.parameter = float(parameter)

    def __repr__(self):
        if self.kind == self.EXACT:
            return "NoisePolicy(exact)"
        return "NoisePolicy({0}, {1})".format(self.kind, self.parameter)

    @classmethod
    def exact(cls):
        return cls(cls.EXACT)

    @classmethod
    def round_to_grid(cls, step):
        return cls(cls.ROUND_TO_GRID, step)

    @classmethod
    def additive(cls, offset):
        return cls(cls.ADDITIVE, offset)

    @property
    def max_error(self):
        """Largest possible distance between answer and true value."""
        if self.kind == self.ROUND_TO_GRID:
            return self.parameter / 2.0
        if self.kind == self.ADDITIVE:
            return abs(self.parameter)
        return 0.0

    def apply(self, value):
        """Distort an exact value according to this policy.

        Args:
            value (float): Exact function value.

        Returns:
            float: Value the oracle answers.
        """
        if self.kind == self.ROUND_TO_GRID:
            return float(np.round(value / self.parameter) * self.parameter)
        if self.kind == self.ADDITIVE:
            return value + self.parameter
        return value


# ORACLES ---
class CountedOracle(object):
    """Membership or evaluation oracle that enforces precision and counts queries.

    Note:
        The oracle is immutable apart from its counters. Counters only grow
        and are protected by a lock, so an oracle may be shared by threads.

        Counts are kept per query kind. An evaluation oracle also counts the
        logical phase queries issued against it by the gradient estimator,
        separately from the raw evaluation calls the simulation needs.
    """

    def __init__(
            self,
            underlying,
            precision=0.0,
            noise_policy=None,
            flip_ambiguous=False,
            label=None):
        """CountedOracle-class constructor.

        Args:
            underlying (ConvexBody or ObjectiveFunction): What is queried.
            precision (float): Precision delta of the answers.
            noise_policy (NoisePolicy): Error model of evaluation answers.
                Defaults to NoisePolicy.exact().
            flip_ambiguous (bool): Membership only. Answer the opposite of
                the exact answer for points within delta of the boundary.
            label (str): Name in traces. Defaults to the underlying name.

        Raises:
            ParamError: If precision is negative, the noise policy can
                exceed it or underlying is neither body nor objective.
        """
        if isinstance(underlying, ConvexBody):
            self.kind = MEMBERSHIP
        elif isinstance(underlying, ObjectiveFunction):
            self.kind = EVALUATION
        else:
            msg = "Can't build an oracle for {0}!".format(underlying)
            raise errors.ParamError(msg)

        if precision < 0:
            msg = "Oracle precision must be >= 0, got {0}!".format(precision)
            raise errors.ParamError(msg)

        noise_policy = noise_policy or NoisePolicy.exact()
        if noise_policy.max_error > precision + 1e-15:
            msg = "{0} may err by {1}, more than precision {2}!".format(
                noise_policy, noise_policy.max_error, precision
            )
            raise errors.ParamError(msg)

        self.underlying = underlying
        self.precision = float(precision)
        self.noise_policy = noise_policy
        self.flip_ambiguous = bool(flip_ambiguous)
        self.name = label or underlying.name
        self._counts = collections.Counter()
        self._lock = threading.Lock()

    def __repr__(self):
        return "CountedOracle({0}, {1}, delta={2}, queries={3})".format(
            self.kind, self.name, self.precision, self.query_count
        )

    @property
    def dimension(self):
        return self.underlying.dimension

    @property
    def query_count(self):
        """Number of queries of this oracle's own kind."""
        return self.count(self.kind)

    @property
    def phase_query_count(self):
        """Number of logical phase queries issued against this oracle."""
        return self.count(PHASE)

    def count(self, kind):
        """Get the number of queries of the given kind."""
        with self._lock:
            return self._counts[kind]

    def counts(self):
        """Get a snapshot of all counters as a plain dict."""
        with self._lock:
            return dict(self._counts)

    def increment(self, kind, amount=1):
        """Add to a counter. Counters never decrease.

        Args:
            kind (str): Counter to increase.
            amount (int): Non-negative increment.
        """
        if amount < 0:
            msg = "Query counters never decrease, got increment {0}!".format(amount)
            raise errors.ParamError(msg)
        with self._lock:
            self._counts[kind] += amount


def as_oracle(underlying):
    """Wrap a body or objective in an exact oracle; pass oracles through."""
    if isinstance(underlying, CountedOracle):
        return underlying
    return CountedOracle(underlying)


def _check_kind(oracle, kind):
    if oracle.kind != kind:
        msg = "{0} can't answer {1} queries!".format(oracle, kind)
        raise errors.ParamError(msg)


def query_membership(oracle, x):
    """Ask a membership oracle whether x is in the body.

    Note:
        Points deeper than delta inside or outside get the exact answer.
        Points in the delta-shell get the exact answer as well, unless the
        oracle flips ambiguous answers. Both are legal answers.

    Args:
        oracle (CountedOracle): Membership oracle.
        x (iterable): Queried point.

    Raises:
        InvalidPoint: If x has non-finite coordinates.
        ParamError: If the oracle is not a membership oracle.

    Returns:
        bool: True for "In", False for "Out".
    """
    _check_kind(oracle, MEMBERSHIP)
    body = oracle.underlying
    point = as_point(x, body.dimension)

    answer = bool(body.membership_predicate(point))
    if oracle.flip_ambiguous and oracle.precision > 0:
        if body.signed_distance is not None:
            if abs(body.signed_distance(point)) <= oracle.precision:
                answer = not answer

    oracle.increment(MEMBERSHIP)
    LOG.debug("membership(%s, %s) -> %s", oracle.name, point, answer)
    tracer.record(MEMBERSHIP, oracle.name, "In" if answer else "Out")
    return answer


def query_evaluation(oracle, x):
    """Ask an evaluation oracle for f(x) up to its precision.

    Args:
        oracle (CountedOracle): Evaluation oracle.
        x (iterable): Queried point.

    Raises:
        InvalidPoint: If x has non-finite coordinates.
        DomainError: If x lies outside the declared domain of f.
        ParamError: If the oracle is not an evaluation oracle.

    Returns:
        float: alpha with |alpha - f(x)| <= delta.
    """
    _check_kind(oracle, EVALUATION)
    objective = oracle.underlying
    point = as_point(x, objective.dimension)

    if not objective.in_domain(point):
        msg = "{0} is outside the domain of {1}!".format(point, objective.name)
        raise errors.DomainError(msg)

    value = oracle.noise_policy.apply(float(objective.evaluate(point)))

    oracle.increment(EVALUATION)
    LOG.debug("evaluation(%s, %s) -> %s", oracle.name, point, value)
    tracer.record(EVALUATION, oracle.name, value)
    return value


def query_evaluation_sweep(oracle, points):
    """Evaluate many points, as needed to realize one phase query.

    Note:
        Each point counts as one raw evaluation query. The trace receives a
        single summary record instead of one record per point.

    Args:
        oracle (CountedOracle): Evaluation oracle.
        points (numpy.ndarray): Array of shape (k, n).

    Raises:
        DomainError: If any point lies outside the declared domain of f.

    Returns:
        numpy.ndarray: The k answers.
    """
    _check_kind(oracle, EVALUATION)
    objective = oracle.underlying
    points = np.asarray(points, dtype=np.float64)
    if not np.all(np.isfinite(points)):
        msg = "Sweep over {0} contains non-finite points!".format(oracle.name)
        raise errors.InvalidPoint(msg)

    values = np.empty(len(points))
    for index, point in enumerate(points):
        if not objective.in_domain(point):
            msg = "{0} is outside the domain of {1}!".format(point, objective.name)
            raise errors.DomainError(msg)
        values[index] = oracle.noise_policy.apply(float(objective.evaluate(point)))

    oracle.increment(EVALUATION, len(points))
    LOG.debug("evaluation sweep(%s) over %s points", oracle.name, len(points))
    tracer.record(EVALUATION, oracle.name, "sweep of {0}".format(len(points)))
    return values


# HALFSPACES ---
class Halfspace(object):
    """The set {y : <normal, y> >= <normal, anchor> - margin}.

    Note:
        A separation oracle queried at p answers with a unit normal c such
        that c.p <= c.y + margin for every y of the body; anchor is p.
        The margin is the error term a separation oracle reports, not a
        proof of validity. failure_probability tracks the separate chance
        that the halfspace is not valid at all.
    """

    def __init__(self, normal, anchor, margin=0.0, failure_probability=0.0):
        normal = as_point(normal)
        length = np.linalg.norm(normal)
        if length == 0:
            msg = "A halfspace needs a nonzero normal!"
            raise errors.ParamError(msg)

        if margin < 0:
            msg = "Halfspace margin must be >= 0, got {0}!".format(margin)
            raise errors.ParamError(msg)

        self.normal = normal / length
        self.anchor = as_point(anchor, normal.size)
        self.margin = float(margin)
        self.failure_probability = float(failure_probability)

    def __repr__(self):
        return "Halfspace(normal={0}, anchor={1}, margin={2})".format(
            self.normal, self.anchor, self.margin
        )

    @property
    def offset(self):
        """Right-hand side of <normal, y> >= offset."""
        return float(np.dot(self.normal, self.anchor) - self.margin)

    def violation(self, points):
        """How far points lie beyond the halfspace (0 if inside).

        Args:
            points (numpy.ndarray): Array of shape (k, n) or a single point.

        Returns:
            numpy.ndarray or float: Non-negative violations.
        """
        points = np.asarray(points, dtype=np.float64)
        excess = np.dot(self.anchor - points, self.normal) - self.margin
        return np.maximum(excess, 0.0)

    def contains(self, points):
        """Boolean mask of points inside the halfspace."""
        return self.violation(points) <= BOUNDARY_TOLERANCE


# SAMPLING ---
def sample_ball(rng, center, radius, samples):
    """Uniform samples from the Euclidean ball B2(center, radius).

    Returns:
        numpy.ndarray: Array of shape (samples, n).
    """
    center = as_point(center)
    n = center.size
    directions = rng.standard_normal(size=(samples, n))
    directions /= np.linalg.norm(directions, axis=1)[:, np.newaxis]
    radii = radius * rng.random(samples) ** (1.0 / n)
    return center + directions * radii[:, np.newaxis]


def sample_body(rng, body, samples, max_draws=None):
    """Uniform samples from a body by rejection from its bounding box.

    Args:
        rng (numpy.random.Generator): Source of randomness.
        body (ConvexBody): Body to sample from.
        samples (int): Number of wanted points.
        max_draws (int): Give up after this many candidate points.

    Raises:
        ParamError: If not enough points were accepted.

    Returns:
        numpy.ndarray: Array of shape (samples, n).
    """
    max_draws = max_draws or samples * 1000
    radius = body.outer_radius
    accepted = []
    draws = 0
    batch = max(samples, 64)
    while len(accepted) < samples and draws < max_draws:
        candidates = rng.uniform(-radius, radius, size=(batch, body.dimension))
        candidates += body.center
        draws += batch
        accepted.extend(point for point in candidates if body.contains(point))

    if len(accepted) < samples:
        msg = "Only {0} of {1} samples of {2} accepted!".format(
            len(accepted), samples, body
        )
        raise errors.ParamError(msg)

    return np.array(accepted[:samples])


# BODY FAMILIES ---
def ball(dimension, radius=1.0, center=None):
    """Euclidean ball B2(center, radius).

    Args:
        dimension (int): Dimension n.
        radius (float): Radius; both r and R of the body.
        center (iterable): Center, defaults to the origin.

    Returns:
        ConvexBody: The ball.
    """
    center = np.zeros(dimension) if center is None else as_point(center, dimension)

    def signed_distance(point):
        return float(np.linalg.norm(point - center) - radius)

    def predicate(point):
        return signed_distance(point) <= BOUNDARY_TOLERANCE

    return ConvexBody(
        name="ball",
        dimension=dimension,
        membership_predicate=predicate,
        inner_radius=radius,
        outer_radius=radius,
        center=center,
        signed_distance=signed_distance,
    )


def box(lower, upper, name="box"):
    """Axis-aligned box with the given corners.

    Args:
        lower (iterable): Lower corner.
        upper (iterable): Upper corner; strictly greater in every coordinate.
        name (str): Name of the body.

    Raises:
        ParamError: If the box is empty or flat.

    Returns:
        ConvexBody: The box.
    """
    lower = as_point(lower)
    upper = as_point(upper, lower.size)
    if np.any(upper <= lower):
        msg = "Box needs lower < upper, got {0} and {1}!".format(lower, upper)
        raise errors.ParamError(msg)

    half_widths = (upper - lower) / 2.0

    def signed_distance(point):
        return box_signed_distance(point, lower, upper)

    def predicate(point):
        return signed_distance(point) <= BOUNDARY_TOLERANCE

    return ConvexBody(
        name=name,
        dimension=lower.size,
        membership_predicate=predicate,
        inner_radius=float(np.min(half_widths)),
        outer_radius=float(np.linalg.norm(half_widths)),
        center=(lower + upper) / 2.0,
        signed_distance=signed_distance,
    )


def smoothed_hypercube(x0, l):
    """The smoothed hypercube SC_{x0,l}.

    Note:
        The body is the set of points within l/(2n+1) of the inner box
        [x0 - 2n/(2n+1) l, x0 - 1/(2n+1) l]^n. It touches every face of the
        cube C_{x0,l} = [x0 - l, x0] and its largest inscribed ball has
        radius l/2.

    Args:
        x0 (iterable): Upper corner of the enclosing cube.
        l (float): Side length of the enclosing cube.

    Raises:
        ParamError: If l is not positive.

    Returns:
        ConvexBody: The smoothed hypercube.
    """
    if l <= 0:
        msg = "Smoothed hypercube needs l > 0, got {0}!".format(l)
        raise errors.ParamError(msg)

    x0 = as_point(x0)
    n = x0.size
    lower = x0 - (2.0 * n / (2 * n + 1)) * l
    upper = x0 - (1.0 / (2 * n + 1)) * l
    rounding = l / (2 * n + 1)
    half_width = (upper[0] - lower[0]) / 2.0

    def signed_distance(point):
        return box_signed_distance(point, lower, upper) - rounding

    def predicate(point):
        return signed_distance(point) <= BOUNDARY_TOLERANCE

    return ConvexBody(
        name="smoothed_hypercube",
        dimension=n,
        membership_predicate=predicate,
        inner_radius=l / 2.0,
        outer_radius=np.sqrt(n) * half_width + rounding,
        center=x0 - l / 2.0,
        signed_distance=signed_distance,
    )


def lift_epigraph(K, f, M):
    """Lift min_{x in K} f(x) to a linear problem over K' in R^(n+1).

    Note:
        K' = {(x', x) : x in K, f(x) <= x' <= M}. Its membership test makes
        exactly one membership query to K and one evaluation query to f, in
        this order, so that query accounting stays exact.

        The lifted body is centered at (M - rho, c) with inner radius
        rho = min(r, (M - f(c)) / (2 + L)) and outer radius
        sqrt(R^2 + (M - m)^2). f(c) is computed once, uncounted, at
        construction time.

    Args:
        K (ConvexBody or CountedOracle): Body or its membership oracle.
        f (ObjectiveFunction or CountedOracle): Objective or its oracle.
        M (float): Upper bound for the lifted coordinate.

    Raises:
        ParamError: If dimensions differ or M does not exceed f at the
            body center.

    Returns:
        ConvexBody: The lifted body. Its attribute "constituents" holds the
            (membership, evaluation) oracles it queries.
    """
    body_oracle = as_oracle(K)
    objective_oracle = as_oracle(f)
    _check_kind(body_oracle, MEMBERSHIP)
    _check_kind(objective_oracle, EVALUATION)

    body = body_oracle.underlying
    objective = objective_oracle.underlying
    if body.dimension != objective.dimension:
        msg = "Can't lift {0} with {1}: dimensions differ!".format(body, objective)
        raise errors.ParamError(msg)

    center_value = objective(body.center)
    rho = min(body.inner_radius, (M - center_value) / (2.0 + objective.lipschitz))
    if rho <= 0:
        msg = "M={0} must exceed f at the body center ({1})!".format(
            M, center_value
        )
        raise errors.ParamError(msg)

    def predicate(point):
        inside = query_membership(body_oracle, point[1:])
        value = query_evaluation(objective_oracle, point[1:])
        return (
            inside
            and value <= point[0] + BOUNDARY_TOLERANCE
            and point[0] <= M + BOUNDARY_TOLERANCE
        )

    spread = M - min(objective.lower_bound, center_value)
    lifted = ConvexBody(
        name="epigraph({0}, {1})".format(body.name, objective.name),
        dimension=body.dimension + 1,
        membership_predicate=predicate,
        inner_radius=rho,
        outer_radius=np.sqrt(body.outer_radius ** 2 + spread ** 2),
        center=np.concatenate([[M - rho], body.center]),
    )
    lifted.constituents = (body_oracle, objective_oracle)
    lifted.upper_bound = float(M)
    LOG.info("Lifted %s: rho=%s, R'=%s", lifted.name, rho, lifted.outer_radius)
    return lifted


# OBJECTIVE FAMILIES ---
def linear_objective(c, body):
    """f(x) = <c, x> with bounds taken over the given body.

    Args:
        c (iterable): Coefficient vector.
        body (ConvexBody): Body that defines m and M.

    Returns:
        ObjectiveFunction: The linear objective.
    """
    c = as_point(c, body.dimension)
    spread = np.linalg.norm(c) * body.outer_radius
    center_value = float(np.dot(c, body.center))
    return ObjectiveFunction(
        name="linear",
        dimension=body.dimension,
        evaluate=lambda x: float(np.dot(c, x)),
        lipschitz=max(float(np.sum(np.abs(c))), 1e-12),
        lower_bound=center_value - spread,
        upper_bound=center_value + spread,
        gradient=lambda x: c.copy(),
        smoothness=0.0,
    )


def quadratic_objective(hessian, lipschitz, minimizer=None, radius=1.0):
    """f(x) = 1/2 (x - x*)^T A (x - x*) for a symmetric PSD matrix A.

    Args:
        hessian (array-like): The matrix A of shape (n, n).
        lipschitz (float): Lipschitz constant valid on the region of use.
        minimizer (iterable): x*, defaults to the origin.
        radius (float): Euclidean radius around x* the bounds are valid on.

    Returns:
        ObjectiveFunction: The quadratic; smoothness is the top eigenvalue.
    """
    hessian = np.atleast_2d(np.array(hessian, dtype=np.float64))
    n = hessian.shape[0]
    minimizer = np.zeros(n) if minimizer is None else as_point(minimizer, n)
    top = float(np.max(np.linalg.eigvalsh(hessian)))

    def evaluate(x):
        shifted = x - minimizer
        return 0.5 * float(shifted @ hessian @ shifted)

    return ObjectiveFunction(
        name="quadratic",
        dimension=n,
        evaluate=evaluate,
        lipschitz=lipschitz,
        lower_bound=0.0,
        upper_bound=0.5 * top * radius ** 2,
        gradient=lambda x: hessian @ (x - minimizer),
        smoothness=top,
    )


def squared_norm_objective(body):
    """f(x) = ||x||_2^2 with bounds taken over the given body."""
    reach = np.linalg.norm(body.center) + body.outer_radius
    return ObjectiveFunction(
        name="squared_norm",
        dimension=body.dimension,
        evaluate=lambda x: float(np.dot(x, x)),
        lipschitz=2.0 * reach,
        lower_bound=0.0,
        upper_bound=reach ** 2,
        gradient=lambda x: 2.0 * x,
        smoothness=2.0,
    )


def abs_sum_objective(dimension, radius=1.0):
    """f(x) = sum_i |x_i|, the standard nonsmooth test function.

    Args:
        dimension (int): Dimension n.
        radius (float): Infinity-norm radius the upper bound is valid on.

    Returns:
        ObjectiveFunction: The objective, with subgradient sign(x).
    """
    return ObjectiveFunction(
        name="abs_sum",
        dimension=dimension,
        evaluate=lambda x: float(np.sum(np.abs(x))),
        lipschitz=float(dimension),
        lower_bound=0.0,
        upper_bound=dimension * radius,
        gradient=np.sign,
    )


def grid_points(lower, upper, resolution):
    """All points of a regular grid on a box, for brute-force checks.

    Args:
        lower (iterable): Lower corner.
        upper (iterable): Upper corner.
        resolution (int): Points per axis.

    Returns:
        numpy.ndarray: Array of shape (resolution ** n, n).
    """
    lower = as_point(lower)
    upper = as_point(upper, lower.size)
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(lower, upper)]
    return np.array(list(itertools.product(*axes)))