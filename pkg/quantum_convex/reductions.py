"""Membership -> separation -> optimization.

Note:
    The height function of a body K towards a point p is

        h_p(x) = -max{t : x + t p_hat in K}

    where p_hat is the unit direction from the body center towards p. It is
    convex and 3 kappa-Lipschitz near the center, it is <= 0 on K and > 0 at
    every p outside K. A subgradient of h_p therefore yields a halfspace
    that holds K but not p.

    Separation answers feed an ellipsoid method. It minimizes a linear
    objective over K; a convex objective f is handled by lifting it to its
    epigraph first.

Example:
    ::

        import numpy as np
        import quantum_convex as qc

        rng = np.random.default_rng(3)
        body = qc.oracles.ball(2)
        report = qc.reductions.minimize_convex(
            body, qc.oracles.squared_norm_objective(body), 1e-2, rng
        )
        report.value  # ~0.0
"""


# IMPORTS ---
# Python imports
import math

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import oracles
from quantum_convex import qgrad
from quantum_convex import subgrad
from quantum_convex import tracer


# CONSTANTS ---
CLASSICAL = "classical"
QUANTUM = "quantum"
SEPARATION = "separation"


# HEIGHT FUNCTION ---
def _direction(body, p):
    offset = oracles.as_point(p, body.dimension) - body.center
    length = np.linalg.norm(offset)
    if length == 0:
        msg = "The height function needs p away from the body center {0}!".format(
            body.center
        )
        raise errors.ParamError(msg)
    return offset / length


def height_eval(K_oracle, p, x, epsilon):
    """Evaluate h_p(x) to precision epsilon by binary search.

    Note:
        The bisection runs over t in [0, 2R] along x + t p_hat to a
        resolution of epsilon / 2. The bracket assumes x lies in K, so that
        t = 0 is inside and t = 2R is certainly outside; x is checked with
        one membership query first. Counting that check, the search makes
        1 + ceil(log2(4R / epsilon)) membership queries.

    Args:
        K_oracle (CountedOracle): Membership oracle of K.
        p (iterable): Point the height function looks towards.
        x (iterable): Point of K to evaluate at. As an objective, h_p is
            only used on B2(center, r/2).
        epsilon (float): Wanted precision; at least 7 kappa delta.

    Raises:
        ParamError: If epsilon < 7 kappa delta.
        BracketError: If x itself is reported outside K, so [0, 2R] does
            not bracket the boundary.

    Returns:
        float: h_p(x).
    """
    body = K_oracle.underlying
    minimum = 7.0 * body.kappa * K_oracle.precision
    if epsilon < minimum:
        msg = "Height precision {0} is below 7*kappa*delta = {1}!".format(
            epsilon, minimum
        )
        raise errors.ParamError(msg)

    direction = _direction(body, p)
    x = oracles.as_point(x, body.dimension)

    if not oracles.query_membership(K_oracle, x):
        msg = "{0} is outside {1}, so [0, 2R] does not bracket its boundary!".format(
            x, body.name
        )
        raise errors.BracketError(msg)

    inside, outside = 0.0, 2.0 * body.outer_radius
    resolution = epsilon / 2.0
    while outside - inside > resolution:
        middle = (inside + outside) / 2.0
        if oracles.query_membership(K_oracle, x + middle * direction):
            inside = middle
        else:
            outside = middle

    return -(inside + outside) / 2.0


def height_function_lipschitz(outer_radius, inner_radius, delta=0.0):
    """Lipschitz constant (R + delta) / (r - delta) of h_p near the center."""
    return (outer_radius + delta) / (inner_radius - delta)


def height_function(K_oracle, p, epsilon):
    """h_p as an ObjectiveFunction whose evaluations query K_oracle.

    Note:
        The domain is B2(center, r/2), the region on which h_p is
        3 kappa-Lipschitz.

    Returns:
        ObjectiveFunction: h_p with L = 3 kappa and bounds [-2R, 0].
    """
    body = K_oracle.underlying
    p = oracles.as_point(p, body.dimension)
    half_radius = body.inner_radius / 2.0

    def domain(x):
        return np.linalg.norm(x - body.center) <= half_radius

    return oracles.ObjectiveFunction(
        name="height({0})".format(body.name),
        dimension=body.dimension,
        evaluate=lambda x: height_eval(K_oracle, p, x, epsilon),
        lipschitz=3.0 * body.kappa,
        lower_bound=-2.0 * body.outer_radius,
        upper_bound=0.0,
        domain=domain,
    )


# SEPARATION ---
class SeparationAnswer(object):
    """Either an assertion that p is (nearly) inside K or a Halfspace."""

    def __init__(self, inside, halfspace=None):
        self.inside = bool(inside)
        self.halfspace = halfspace

    def __repr__(self):
        if self.inside:
            return "SeparationAnswer(Inside)"
        return "SeparationAnswer({0})".format(self.halfspace)


def separation_margin(n, outer_radius, kappa, epsilon, rho):
    """(30000 R + 25) n^3 eps^(1/6) kappa^2 / rho."""
    return (30000.0 * outer_radius + 25.0) * n ** 3 * epsilon ** (1.0 / 6) * kappa ** 2 / rho


def separation_precision(eta, n, outer_radius, kappa, rho):
    """Membership precision that makes the quantum separation eta-accurate.

    Args:
        eta (float): Wanted separation margin.
        n (int): Dimension.
        outer_radius (float): R of the body.
        kappa (float): R / r of the body.
        rho (float): Failure probability.

    Returns:
        tuple: (epsilon, delta) with epsilon = 7 kappa delta and
            separation_margin(n, R, kappa, epsilon, rho) = eta.
    """
    epsilon = (eta * rho / ((30000.0 * outer_radius + 25.0) * n ** 3 * kappa ** 2)) ** 6
    return epsilon, epsilon / (7.0 * kappa)


def _trivial_answers(K_oracle, p):
    """Shared first two branches of every separation procedure."""
    body = K_oracle.underlying
    p = oracles.as_point(p, body.dimension)
    if oracles.query_membership(K_oracle, p):
        return SeparationAnswer(True)

    offset = p - body.center
    if np.linalg.norm(offset) > body.outer_radius:
        # K lies in B2(center, R), so {y : <y - p, p - center> < 0} holds it.
        return SeparationAnswer(False, oracles.Halfspace(-offset, p))

    return None


def _record(K_oracle, answer):
    K_oracle.increment(SEPARATION)
    tracer.record(SEPARATION, K_oracle.name, answer)
    return answer


class QuantumSeparationSetup(object):
    """Precision, sampling radius and register width of a quantum separation.

    Note:
        The subgradient of h_p is estimated at a grid node of
        B_inf(center, r1) with eps = 7 kappa delta, L = 3 kappa and the
        effective smoothness of r1 and eps. The constructor checks the whole
        chain before any query is made:

        * eps < min(1, r1/n^2) and B_inf(center, r1) inside B2(center, r/2)
        * the bisection step eps/2 is resolvable in double precision
        * a register width exists, and its grid step 2L/N is at most
          1/sqrt(n): h_p has slope 1 along p_hat, so some coordinate of its
          gradient is at least 1/sqrt(n) and can't round to 0
        * the phase state and the raw evaluations fit their budgets

        Use for_body() to derive the largest delta that passes.

    Attributes:
        delta (float): Membership precision.
        epsilon (float): Precision of the h_p evaluations, 7 kappa delta.
        r1 (float): Half side of the sampling box.
        lipschitz (float): L = 3 kappa.
        beta (float): Effective smoothness of the estimator.
        params (GradParams): Derived register constants.
        repetitions (int): Gradient estimates per subgradient.
    """

    def __init__(self, body, delta, r1=None):
        """QuantumSeparationSetup-class constructor.

        Args:
            body (ConvexBody): Body to separate from.
            delta (float): Membership precision.
            r1 (float): Half side of the sampling box. Defaults to
                QUANTUM_SEPARATION_RADIUS * r.

        Raises:
            ParamError: If delta >= min(r, 1) / (7 kappa).
            ParamsInfeasible: If r1 leaves the domain of h_p, eps violates
                its bounds or no usable register width exists.
            StateTooLarge: If the simulation exceeds its budgets.
        """
        n = body.dimension
        kappa = body.kappa
        bound = min(body.inner_radius, 1.0) / (7.0 * kappa)
        if not 0 < delta < bound:
            msg = "Separation needs 0 < delta < {0}, got delta={1}!".format(bound, delta)
            raise errors.ParamError(msg)

        self.body = body
        self.delta = float(delta)
        self.r1 = float(r1 or config.QUANTUM_SEPARATION_RADIUS * body.inner_radius)
        self.epsilon = 7.0 * kappa * self.delta
        self.lipschitz = 3.0 * kappa

        if math.sqrt(n) * self.r1 > body.inner_radius / 2.0:
            msg = "r1={0} leaves the domain B2(c, r/2) of h_p on {1}!".format(
                self.r1, body.name
            )
            raise errors.ParamsInfeasible(msg)

        if not self.epsilon < min(1.0, self.r1 / n ** 2):
            msg = "eps = 7*kappa*delta = {0} must stay below min(1, r1/n^2) = {1}!".format(
                self.epsilon, min(1.0, self.r1 / n ** 2)
            )
            raise errors.ParamsInfeasible(msg)

        reach = 2.0 * body.outer_radius + float(np.max(np.abs(body.center)))
        floor = config.HEIGHT_RESOLUTION_ULPS * np.spacing(reach)
        if self.epsilon / 2.0 < floor:
            msg = "Bisection step eps/2 = {0} is below {1}, the resolution of doubles on {2}!".format(
                self.epsilon / 2.0, floor, body.name
            )
            raise errors.ParamsInfeasible(msg)

        self.beta = subgrad.effective_smoothness(n, self.lipschitz, self.r1, self.epsilon)
        self.params = qgrad.derive_grad_params(n, self.lipschitz, self.beta, self.epsilon)
        if self.params.grid_step > 1.0 / math.sqrt(n):
            msg = (
                "Grid step 2L/N = {0:.6g} exceeds 1/sqrt(n) = {1:.6g}: N={2} can't "
                "resolve the gradient of h_p, use a smaller delta!"
            ).format(self.params.grid_step, 1.0 / math.sqrt(n), self.params.N)
            raise errors.ParamsInfeasible(msg)

        qgrad.check_budget(self.params.N, n)
        self.repetitions = qgrad.repetitions_for(n, self.lipschitz, self.beta, self.epsilon)
        if self.evaluations > config.SEPARATION_SWEEP_BUDGET:
            msg = "A separation of {0} needs {1} raw h_p evaluations, budget is {2}!".format(
                body.name, self.evaluations, config.SEPARATION_SWEEP_BUDGET
            )
            raise errors.StateTooLarge(msg)

    def __repr__(self):
        return "QuantumSeparationSetup(delta={0:.6g}, r1={1:.6g}, N={2}, T={3})".format(
            self.delta, self.r1, self.params.N, self.repetitions
        )

    @classmethod
    def for_body(cls, body, bits=None, r1=None):
        """Derive the largest delta whose register width is bits.

        Note:
            eps is placed in the middle of the admissible range of the
            register width, at sqrt(n eps beta) = L / (36 pi 2^bits). bits
            defaults to the smallest width with 2L/N <= 1/sqrt(n).

        Args:
            body (ConvexBody): Body to separate from.
            bits (int): Bits per register.
            r1 (float): Half side of the sampling box.

        Raises:
            ParamsInfeasible: If no delta works, see the constructor.
            StateTooLarge: If the simulation exceeds its budgets.

        Returns:
            QuantumSeparationSetup: A checked setup.
        """
        n = body.dimension
        lipschitz = 3.0 * body.kappa
        r1 = r1 or config.QUANTUM_SEPARATION_RADIUS * body.inner_radius
        if bits is None:
            bits = max(int(math.ceil(math.log2(2.0 * math.sqrt(n) * lipschitz) - 1e-9)), 1)

        # sqrt(n eps beta) = s with beta = 2 n^(1/3) L / (r1^(2/3) eps^(1/3))
        scale = lipschitz / (36.0 * math.pi * 2 ** bits)
        epsilon = r1 * (scale ** 2 / (2.0 * n ** (4.0 / 3) * lipschitz)) ** 1.5
        setup = cls(body, epsilon / (7.0 * body.kappa), r1)
        LOG.info("Quantum separation of %s: %s", body.name, setup)
        return setup

    @property
    def evaluations(self):
        """Raw h_p evaluations of one subgradient, N^n T."""
        return self.params.state_size * self.repetitions


def separating_halfspace(K_oracle, p, rho, delta, rng, r1=None):
    """Separate p from K with the quantum subgradient of h_p.

    Note:
        The whole parameter chain is checked before the first query, see
        QuantumSeparationSetup. A zero subgradient carries no direction; it
        is estimated again at a fresh grid node, up to
        QUANTUM_SEPARATION_ATTEMPTS times.

    Args:
        K_oracle (CountedOracle): Membership oracle with precision <= delta.
        p (iterable): Point to separate.
        rho (float): Failure probability.
        delta (float): Membership precision; below min(r, 1) / (7 kappa).
        rng (numpy.random.Generator): Seeded generator.
        r1 (float): Half side of the sampling box of the subgradient.

    Raises:
        ParamError: If delta violates its bound.
        ParamsInfeasible: If delta admits no usable subgradient.
        StateTooLarge: If the simulation exceeds its budgets.
        NoConvergence: If every subgradient estimate was zero.

    Returns:
        SeparationAnswer: Inside, or a Halfspace with the worst-case margin.
    """
    body = K_oracle.underlying
    if K_oracle.precision > delta:
        msg = "Separation needs oracle precision <= delta, got {0} > {1}!".format(
            K_oracle.precision, delta
        )
        raise errors.ParamError(msg)
    setup = QuantumSeparationSetup(body, delta, r1)

    answer = _trivial_answers(K_oracle, p)
    if answer is not None:
        return _record(K_oracle, answer)

    n = body.dimension
    p = oracles.as_point(p, n)
    epsilon = setup.epsilon
    height = oracles.CountedOracle(height_function(K_oracle, p, epsilon), precision=epsilon)
    for attempt in range(config.QUANTUM_SEPARATION_ATTEMPTS):
        result = subgrad.quantum_subgradient(
            height, epsilon, setup.lipschitz, body.center, setup.r1, rng
        )
        length = np.linalg.norm(result.gradient)
        if length > 0:
            break
        LOG.warning("Zero subgradient of h_p at %s (attempt %s)", p, attempt + 1)
    else:
        msg = "Every one of {0} subgradients of h_p at {1} was zero!".format(
            config.QUANTUM_SEPARATION_ATTEMPTS, p
        )
        raise errors.NoConvergence(msg)

    margin = separation_margin(n, body.outer_radius, body.kappa, epsilon, rho)
    halfspace = oracles.Halfspace(-result.gradient, p, margin / length, rho)
    LOG.debug("Quantum separation of %s: %s", p, halfspace)
    return _record(K_oracle, SeparationAnswer(False, halfspace))


def classical_separation(K_oracle, p, rng, r1=None, step=None, precision=None):
    """Separate p from K with a finite-difference subgradient of h_p.

    Note:
        The subgradient g is taken at a uniform point y of B_inf(center, r1).
        Convexity of h_p and h_p <= 0 on K give
        <g, x> <= <g, y> - h_p(y) for all x in K. The emitted margin covers
        the finite-difference error.

    Args:
        K_oracle (CountedOracle): Membership oracle.
        p (iterable): Point to separate.
        rng (numpy.random.Generator): Seeded generator.
        r1 (float): Sampling radius. Default is a small fraction of r.
        step (float): Finite-difference step. Default is r1 / 10.
        precision (float): Precision of the h_p evaluations.

    Raises:
        NoConvergence: If the finite-difference subgradient is zero.

    Returns:
        SeparationAnswer: Inside, or a Halfspace.
    """
    answer = _trivial_answers(K_oracle, p)
    if answer is not None:
        return _record(K_oracle, answer)

    body = K_oracle.underlying
    n = body.dimension
    p = oracles.as_point(p, n)
    r1 = r1 or config.CLASSICAL_SEPARATION_RADIUS * body.inner_radius
    step = step or r1 / 10.0
    precision = max(
        precision or config.HEIGHT_SEARCH_PRECISION,
        7.0 * body.kappa * K_oracle.precision,
    )

    height = oracles.CountedOracle(height_function(K_oracle, p, precision), precision=precision)
    y = body.center + rng.uniform(-r1, r1, size=n)
    gradient = subgrad.finite_difference_gradient(height, y, step)
    length = np.linalg.norm(gradient)
    if length == 0:
        msg = "Finite-difference subgradient of h_p at {0} is zero!".format(y)
        raise errors.NoConvergence(msg)

    height_at_y = oracles.query_evaluation(height, y)
    derivative_error = 2.0 * precision / step + body.kappa * step / body.inner_radius
    slack = 2.0 * body.outer_radius * math.sqrt(n) * derivative_error
    bound = float(np.dot(gradient, y)) - height_at_y - float(np.dot(gradient, p))
    margin = max(bound, 0.0) / length + slack

    halfspace = oracles.Halfspace(-gradient, p, margin)
    LOG.debug("Classical separation of %s: %s", p, halfspace)
    return _record(K_oracle, SeparationAnswer(False, halfspace))


# OPTIMIZATION ---
class OptimizeReport(object):
    """Result of a cutting-plane optimization.

    Attributes:
        point (numpy.ndarray): Best point found, None if no feasible point.
        value (float): Objective value at point.
        lower_bound (float): Certified lower bound of the optimum.
        iterations (int): Ellipsoid steps taken.
        separation_queries (int): Separation calls made.
        membership_queries (int): Membership calls (filled by callers).
        evaluation_queries (int): Evaluation calls (filled by callers).
        log_volumes (list): Log of the ellipsoid volume (up to a constant)
            before every step.
        converged (bool): True if value - lower_bound <= epsilon.
    """

    FIELDS = (
        "value",
        "lower_bound",
        "iterations",
        "separation_queries",
        "membership_queries",
        "evaluation_queries",
        "converged",
    )

    def __init__(self, point=None, value=math.inf, lower_bound=-math.inf):
        self.point = point
        self.value = value
        self.lower_bound = lower_bound
        self.iterations = 0
        self.separation_queries = 0
        self.membership_queries = 0
        self.evaluation_queries = 0
        self.log_volumes = []
        self.converged = False

    def __repr__(self):
        return "OptimizeReport(value={0}, point={1}, iterations={2}, converged={3})".format(
            self.value, self.point, self.iterations, self.converged
        )

    @property
    def gap(self):
        return self.value - self.lower_bound

    def as_row(self):
        """Values of FIELDS, in order, for CSV output."""
        return [getattr(self, field) for field in self.FIELDS]


class Ellipsoid(object):
    """E = {x : (x - center)^T P^-1 (x - center) <= 1} with cut updates.

    Note:
        A cut keeps {x : a^T x <= b}. Its depth is
        alpha = (a^T center - b) / sqrt(a^T P a); alpha < 0 is a shallow cut,
        alpha = 0 a central cut. Updates require -1/n < alpha < 1.
    """

    def __init__(self, center, radius):
        self.center = oracles.as_point(center)
        self.dimension = self.center.size
        self.matrix = radius ** 2 * np.eye(self.dimension)

    def log_volume(self):
        """Log of the volume, up to the constant of the unit ball."""
        sign, logdet = np.linalg.slogdet(self.matrix)
        return 0.5 * logdet if sign > 0 else -math.inf

    def width(self, direction):
        """sqrt(a^T P a): half the width of E along a."""
        return math.sqrt(max(float(direction @ self.matrix @ direction), 0.0))

    def depth(self, normal, bound):
        width = self.width(normal)
        if width == 0:
            return math.inf
        return (float(normal @ self.center) - bound) / width

    def cut(self, normal, bound):
        """Shrink E to the smallest ellipsoid holding E cut by a^T x <= b.

        Note:
            Cuts too shallow to shrink E (alpha <= -1/n) are deepened to
            alpha = -1/(2n). The extra removed slice lies within the cut
            margin of the halfspace.

        Returns:
            bool: False if the cut removes all of E.
        """
        n = self.dimension
        alpha = self.depth(normal, bound)
        if alpha >= 1.0:
            return False

        width = self.width(normal)
        if alpha <= -1.0 / n:
            LOG.debug("Deepening shallow cut from alpha=%s", alpha)
            alpha = -1.0 / (2.0 * n)
            bound = float(normal @ self.center) - alpha * width

        if n == 1:
            # Interval [c - w, c + w] intersected with x <= b (or x >= b).
            low = float(self.center[0] - width)
            high = float(self.center[0] + width)
            limit = bound / normal[0]
            if normal[0] > 0:
                high = min(high, limit)
            else:
                low = max(low, limit)
            self.center = np.array([(low + high) / 2.0])
            self.matrix = np.array([[((high - low) / 2.0) ** 2]])
            return True

        step = self.matrix @ normal / width
        self.center = self.center - (1.0 + n * alpha) / (n + 1.0) * step
        factor = n ** 2 * (1.0 - alpha ** 2) / (n ** 2 - 1.0)
        shrink = 2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha))
        self.matrix = factor * (self.matrix - shrink * np.outer(step, step))
        self.matrix = (self.matrix + self.matrix.T) / 2.0
        return True


def optimize_linear(
        separation,
        c,
        outer_radius,
        inner_radius,
        epsilon,
        rng,
        center=None,
        max_iterations=None,
        cut_tolerance=None):
    """Minimize c^T x over K given a separation procedure, with an ellipsoid method.

    Note:
        Halfspace margins above cut_tolerance are clipped to it, so that
        worst-case margins still let the method progress.

    Args:
        separation (function): (point, rng) -> SeparationAnswer.
        c (iterable): Objective direction (unit vector).
        outer_radius (float): R with K in B2(center, R).
        inner_radius (float): r with B2(center, r) in K.
        epsilon (float): Wanted accuracy.
        rng (numpy.random.Generator): Passed on to separation.
        center (iterable): Center of both balls. Default is the origin.
        max_iterations (int): Iteration cap.
        cut_tolerance (float): Largest margin used for a cut. Default eps/4.

    Raises:
        NoConvergence: If the cap is hit, no feasible point was found or
            the separation gave up. The error carries the partial report.

    Returns:
        OptimizeReport: Best feasible point with counters filled.
    """
    c = oracles.as_point(c)
    n = c.size
    center = np.zeros(n) if center is None else oracles.as_point(center, n)
    max_iterations = max_iterations or config.ELLIPSOID_MAX_ITERATIONS
    cut_tolerance = epsilon / 4.0 if cut_tolerance is None else cut_tolerance
    if inner_radius <= 0 or outer_radius < inner_radius:
        msg = "Optimization needs 0 < r <= R, got r={0}, R={1}!".format(
            inner_radius, outer_radius
        )
        raise errors.ParamError(msg)

    ellipsoid = Ellipsoid(center, outer_radius)
    report = OptimizeReport()

    for iteration in range(max_iterations):
        report.iterations = iteration + 1
        report.log_volumes.append(ellipsoid.log_volume())
        point = ellipsoid.center.copy()

        try:
            answer = separation(point, rng)
        except errors.NoConvergence as err:
            err.report = err.report or report
            raise
        report.separation_queries += 1

        if answer.inside:
            value = float(c @ point)
            if value < report.value:
                report.point, report.value = point, value
            applied = ellipsoid.cut(c, value)
        else:
            halfspace = answer.halfspace
            margin = min(halfspace.margin, cut_tolerance)
            applied = ellipsoid.cut(
                -halfspace.normal,
                -float(halfspace.normal @ halfspace.anchor) + margin,
            )

        lower = float(c @ ellipsoid.center) - ellipsoid.width(c)
        report.lower_bound = max(report.lower_bound, min(lower, report.value))
        if report.point is not None and report.gap <= epsilon:
            report.converged = True
            break

        if not applied:
            LOG.warning("Cut at %s removes the whole ellipsoid; stopping early", point)
            break
    else:
        msg = "Ellipsoid method hit the cap of {0} iterations (gap {1})!".format(
            max_iterations, report.gap
        )
        LOG.warning(msg)
        raise errors.NoConvergence(msg, report)

    if report.point is None:
        msg = "Ellipsoid method stopped without a feasible point!"
        raise errors.NoConvergence(msg, report)

    LOG.info(
        "Ellipsoid finished after %s iterations: value=%s, gap=%s",
        report.iterations, report.value, report.gap,
    )
    return report


def separation_procedure(K_oracle, separation=CLASSICAL, delta=None, rho=0.2, bits=None):
    """Bind a separation procedure to a membership oracle.

    Note:
        For quantum separation, delta defaults to the largest precision of
        QuantumSeparationSetup.for_body(). The setup is checked here, so an
        infeasible configuration fails before the first query.

    Args:
        K_oracle (CountedOracle): Membership oracle of the body.
        separation (str): "classical" (default) or "quantum".
        delta (float): Membership precision for quantum separation.
        rho (float): Failure probability for quantum separation.
        bits (int): Register width for quantum separation; ignored if
            delta is given.

    Raises:
        ParamError: If separation names no known procedure.
        ParamsInfeasible: If quantum separation has no usable parameters.
        StateTooLarge: If quantum separation exceeds its budgets.

    Returns:
        function: (point, rng) -> SeparationAnswer.
    """
    if separation == CLASSICAL:
        def separate(point, generator):
            return classical_separation(K_oracle, point, generator)
        return separate

    if separation == QUANTUM:
        body = K_oracle.underlying
        if delta is None:
            setup = QuantumSeparationSetup.for_body(body, bits)
        else:
            setup = QuantumSeparationSetup(body, delta)

        def separate(point, generator):
            return separating_halfspace(
                K_oracle, point, rho, setup.delta, generator, r1=setup.r1
            )
        return separate

    msg = "Unknown separation procedure {0}, use {1} or {2}!".format(
        separation, CLASSICAL, QUANTUM
    )
    raise errors.ParamError(msg)


def linear_direction(objective):
    """The vector c of a linear objective <c, x>, None for other objectives."""
    if objective.smoothness != 0 or objective.gradient is None:
        return None
    return oracles.as_point(objective.gradient(np.zeros(objective.dimension)), objective.dimension)


def minimize_linear(
        K,
        c,
        epsilon,
        rng,
        separation=CLASSICAL,
        delta=None,
        rho=0.2,
        bits=None,
        max_iterations=None):
    """Minimize <c, x> over K directly, without lifting.

    Note:
        Only membership queries to K are made. The ellipsoid runs on the
        unit direction c / ||c|| to accuracy epsilon / ||c||; value and
        lower bound are reported for c itself.

    Args:
        K (ConvexBody or CountedOracle): Body or its membership oracle.
        c (iterable): Objective vector, nonzero.
        epsilon (float): Wanted accuracy of the value.
        rng (numpy.random.Generator): Seeded generator.
        separation (str): "classical" (default) or "quantum".
        delta (float): Membership precision for quantum separation.
        rho (float): Failure probability for quantum separation.
        bits (int): Register width for quantum separation.
        max_iterations (int): Iteration cap of the ellipsoid method.

    Raises:
        NoConvergence: If the ellipsoid method fails.
        ParamError: If c is zero or separation is unknown.

    Returns:
        OptimizeReport: Best point and its value <c, x>.
    """
    body_oracle = oracles.as_oracle(K)
    body = body_oracle.underlying
    c = oracles.as_point(c, body.dimension)
    length = float(np.linalg.norm(c))
    if length == 0:
        msg = "Can't minimize the zero objective over {0}!".format(body.name)
        raise errors.ParamError(msg)

    separate = separation_procedure(body_oracle, separation, delta, rho, bits)
    membership_before = body_oracle.query_count

    def rescale(report):
        report.value *= length
        report.lower_bound *= length
        report.membership_queries = body_oracle.query_count - membership_before
        return report

    try:
        report = optimize_linear(
            separate,
            c / length,
            body.outer_radius,
            body.inner_radius,
            epsilon / length,
            rng,
            center=body.center,
            max_iterations=max_iterations,
        )
    except errors.NoConvergence as err:
        if err.report is not None:
            rescale(err.report)
        raise

    LOG.info("Minimized <%s, x> over %s: %s", c, body.name, report)
    return rescale(report)


def minimize_convex(
        K,
        f,
        epsilon,
        rng,
        separation=CLASSICAL,
        delta=None,
        rho=0.2,
        bits=None,
        max_iterations=None):
    """Minimize a convex f over K via its epigraph.

    Note:
        Every membership query to the lifted body costs one membership query
        to K and one evaluation query to f. The report counts all three.
        The lifted coordinate is bounded by M = f.upper_bound + epsilon.

        Quantum separation runs on the lifted body, whose kappa is at least
        about 6.6. Its parameters are checked before the first query; on
        most lifted bodies no register width passes and ParamsInfeasible is
        raised. Linear objectives can use minimize_linear() instead.

    Args:
        K (ConvexBody or CountedOracle): Body or its membership oracle.
        f (ObjectiveFunction or CountedOracle): Objective or its oracle.
        epsilon (float): Wanted accuracy of the value.
        rng (numpy.random.Generator): Seeded generator.
        separation (str): "classical" (default) or "quantum".
        delta (float): Membership precision for quantum separation.
        rho (float): Failure probability for quantum separation.
        bits (int): Register width for quantum separation.
        max_iterations (int): Iteration cap of the ellipsoid method.

    Raises:
        NoConvergence: If the ellipsoid method fails.
        ParamError: If separation names no known procedure.
        ParamsInfeasible: If quantum separation has no usable parameters.
        StateTooLarge: If quantum separation exceeds its budgets.

    Returns:
        OptimizeReport: x-part of the best lifted point and its f-value.
    """
    body_oracle = oracles.as_oracle(K)
    objective_oracle = oracles.as_oracle(f)
    objective = objective_oracle.underlying
    upper = objective.upper_bound + epsilon

    lifted = oracles.lift_epigraph(body_oracle, objective_oracle, upper)
    lifted_oracle = oracles.CountedOracle(lifted)
    separate = separation_procedure(lifted_oracle, separation, delta, rho, bits)

    membership_before = body_oracle.query_count
    evaluation_before = objective_oracle.query_count
    direction = np.zeros(lifted.dimension)
    direction[0] = 1.0

    def fill_counts(report):
        report.membership_queries = body_oracle.query_count - membership_before
        report.evaluation_queries = objective_oracle.query_count - evaluation_before

    try:
        lifted_report = optimize_linear(
            separate,
            direction,
            lifted.outer_radius,
            lifted.inner_radius,
            epsilon,
            rng,
            center=lifted.center,
            max_iterations=max_iterations,
        )
    except errors.NoConvergence as err:
        if err.report is not None:
            fill_counts(err.report)
            if err.report.point is not None:
                err.report.point = err.report.point[1:]
        raise

    report = OptimizeReport(
        point=lifted_report.point[1:],
        lower_bound=lifted_report.lower_bound,
    )
    report.value = oracles.query_evaluation(objective_oracle, report.point)
    report.iterations = lifted_report.iterations
    report.separation_queries = lifted_report.separation_queries
    report.log_volumes = lifted_report.log_volumes
    report.converged = lifted_report.converged
    fill_counts(report)
    LOG.info("Minimized %s over %s: %s", objective.name, lifted.name, report)
    return report
