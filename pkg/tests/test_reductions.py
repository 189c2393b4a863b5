"""
Unit tests for quantum_convex.reductions
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# IMPORTS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Python imports
import math
from unittest import mock

# Third party imports
import numpy as np

# Local imports
from base import BaseTestCase
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import families
from quantum_convex import oracles
from quantum_convex import reductions
from quantum_convex import subgrad


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# GLOBALS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
EPSILON = 1e-2
HEIGHT_EPSILON = 1e-6
VALIDITY_SEEDS = 200
VALIDITY_SAMPLES = 500
FAILURE_PROBABILITY = 0.2

# Bodies with a point p whose height function h_p is checked.
HEIGHT_BODIES = {
    "ball_2d": (lambda: oracles.ball(2), [1.5, 0.3]),
    "box_2d": (lambda: oracles.box([-1.0, -1.0], [1.0, 1.0]), [1.2, 0.4]),
    "smoothed_hypercube_2d": (lambda: oracles.smoothed_hypercube([1.0, 1.0], 1.0), [1.05, 0.6]),
}


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# TESTS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~


def _test_height_shape(body_factory, p):
    """
    h_p is convex along segments of B2(c, r/2) and at most eps on K.

    Args:
        body_factory (function): Returns the ConvexBody.
        p (list): Point to separate.

    Returns:
        test function for the given body
    """
    def test(self):
        body = body_factory()
        oracle = oracles.CountedOracle(body)
        height = reductions.height_function(oracle, p, HEIGHT_EPSILON)

        points = oracles.sample_ball(self.rng, body.center, body.inner_radius / 2.0, 200)
        for x, y in zip(points[:100], points[100:]):
            weight = self.rng.random()
            middle = height(weight * x + (1.0 - weight) * y)
            chord = weight * height(x) + (1.0 - weight) * height(y)
            self.assertLessEqual(middle, chord + 2.0 * HEIGHT_EPSILON)

        for x in oracles.sample_body(self.rng, body, 300):
            self.assertLessEqual(reductions.height_eval(oracle, p, x, HEIGHT_EPSILON), HEIGHT_EPSILON)

    return test


class TestHeightMeta(type):

    def __new__(_mcs, _name, _bases, _dict):
        """
        Overriding the class creation method allows to create shape tests of
        h_p for every body in HEIGHT_BODIES on the fly.
        """
        for body_name, (body_factory, p) in HEIGHT_BODIES.items():
            _dict["test_shape_{}".format(body_name)] = _test_height_shape(body_factory, p)

        return type.__new__(_mcs, _name, _bases, _dict)


class TestHeightFunction(BaseTestCase, metaclass=TestHeightMeta):

    def setUp(self):
        super(TestHeightFunction, self).setUp()
        self.oracle = oracles.CountedOracle(oracles.ball(2))
        self.p = [2.0, 0.0]

    def test_center(self):
        """ From the center of the unit ball the boundary is 1 away """
        self.assertAlmostEqual(reductions.height_eval(self.oracle, self.p, [0.0, 0.0], 1e-3), -1.0, delta=1e-3)

    def test_off_center(self):
        """ The ray leaves the ball where (x1 + t)^2 + x2^2 = 1 """
        expected = -(math.sqrt(1.0 - 0.01) - 0.2)
        value = reductions.height_eval(self.oracle, self.p, [0.2, 0.1], 1e-3)
        self.assertAlmostEqual(value, expected, delta=1e-3)
        self.assertLessEqual(value, 0.0)

    def test_query_count(self):
        """ 1 + ceil(log2(4R / eps)) membership queries """
        reductions.height_eval(self.oracle, self.p, [0.0, 0.0], 1e-3)
        self.assertEqual(self.oracle.query_count, 1 + math.ceil(math.log2(4.0 / 1e-3)))

    def test_lipschitz(self):
        """ h_p is 3 kappa-Lipschitz on B2(center, r/2) """
        height = reductions.height_function(self.oracle, self.p, 1e-6)
        self.assertEqual(height.lipschitz, 3.0)
        points = oracles.sample_ball(self.rng, np.zeros(2), 0.5, 20)
        for x, y in zip(points[:10], points[10:]):
            gap = abs(height(x) - height(y))
            self.assertLessEqual(gap, 3.0 * np.linalg.norm(x - y) + 1e-6)

    def test_domain(self):
        """ Evaluations outside B2(center, r/2) are refused """
        height = oracles.CountedOracle(reductions.height_function(self.oracle, self.p, 1e-3))
        with self.assertRaises(errors.DomainError):
            oracles.query_evaluation(height, [0.6, 0.0])

    def test_precision_floor(self):
        """ eps below 7 kappa delta is refused """
        coarse = oracles.CountedOracle(oracles.ball(2), precision=0.01)
        with self.assertRaises(errors.ParamError):
            reductions.height_eval(coarse, self.p, [0.0, 0.0], 0.05)

    def test_outside_start(self):
        """ Starting points outside K can't be bracketed """
        with self.assertRaises(errors.BracketError):
            reductions.height_eval(self.oracle, self.p, [1.5, 0.0], 1e-3)

    def test_bracket(self):
        """ From any x in K the boundary lies within [0, 2R] along p_hat """
        value = reductions.height_eval(self.oracle, self.p, [-0.99, 0.0], 1e-3)
        self.assertAlmostEqual(value, -1.99, delta=1e-3)
        self.assertGreaterEqual(value, -2.0)
        with self.assertRaisesRegex(errors.BracketError, r"\[0, 2R\]"):
            reductions.height_eval(self.oracle, self.p, [0.0, 1.01], 1e-3)

    def test_p_at_center(self):
        """ The direction towards p must be defined """
        with self.assertRaises(errors.ParamError):
            reductions.height_eval(self.oracle, [0.0, 0.0], [0.0, 0.0], 1e-3)

    def test_lipschitz_formula(self):
        """ (R + delta) / (r - delta) """
        self.assertAlmostEqual(reductions.height_function_lipschitz(2.0, 1.0), 2.0)
        self.assertAlmostEqual(reductions.height_function_lipschitz(2.0, 1.0, 0.5), 5.0)


class TestSeparation(BaseTestCase):

    def test_inside(self):
        """ Points of K are reported inside """
        oracle = oracles.CountedOracle(oracles.ball(2))
        answer = reductions.classical_separation(oracle, [0.1, 0.2], self.rng)
        self.assertTrue(answer.inside)
        self.assertIsNone(answer.halfspace)
        self.assertEqual(oracle.count(reductions.SEPARATION), 1)

    def test_far_point(self):
        """ Points beyond R are separated without a subgradient """
        oracle = oracles.CountedOracle(oracles.ball(2))
        answer = reductions.classical_separation(oracle, [1.2, 0.0], self.rng)
        self.assertFalse(answer.inside)
        self.assertAllClose(answer.halfspace.normal, [-1.0, 0.0])
        self.assertEqual(oracle.query_count, 1)

        samples = oracles.sample_body(self.rng, oracle.underlying, 200)
        self.assertTrue(np.all(answer.halfspace.contains(samples)))

    def test_classical_halfspace(self):
        """ Points between K and B2(c, R) get a valid finite-difference cut """
        oracle = oracles.CountedOracle(oracles.box([-1.0, -1.0], [1.0, 1.0]))
        answer = reductions.classical_separation(oracle, [1.2, 0.0], self.rng)
        self.assertFalse(answer.inside)

        halfspace = answer.halfspace
        self.assertAllClose(halfspace.normal, [-1.0, 0.0], atol=1e-3)
        self.assertAlmostEqual(np.linalg.norm(halfspace.normal), 1.0)
        corners = oracles.grid_points([-1.0, -1.0], [1.0, 1.0], 11)
        self.assertTrue(np.all(halfspace.contains(corners)))

    def test_quantum_trivial_branches(self):
        """ The quantum procedure shares the inside and far-point answers """
        oracle = oracles.CountedOracle(oracles.ball(2))
        delta = reductions.QuantumSeparationSetup.for_body(oracle.underlying).delta
        inside = reductions.separating_halfspace(oracle, [0.1, 0.0], 0.2, delta, self.rng)
        far = reductions.separating_halfspace(oracle, [2.0, 0.0], 0.2, delta, self.rng)
        self.assertTrue(inside.inside)
        self.assertFalse(far.inside)
        self.assertAllClose(far.halfspace.normal, [-1.0, 0.0])
        self.assertEqual(oracle.count(reductions.SEPARATION), 2)

    def test_quantum_delta_bound(self):
        """ delta must stay below min(r, 1) / (7 kappa) """
        oracle = oracles.CountedOracle(oracles.ball(2))
        with self.assertRaises(errors.ParamError):
            reductions.separating_halfspace(oracle, [2.0, 0.0], 0.2, 0.2, self.rng)

    def test_margin_inverse(self):
        """ separation_precision inverts separation_margin """
        epsilon, delta = reductions.separation_precision(0.5, 2, 1.5, 1.5, 0.2)
        self.assertAlmostEqual(reductions.separation_margin(2, 1.5, 1.5, epsilon, 0.2), 0.5)
        self.assertAlmostEqual(delta, epsilon / (7.0 * 1.5))


class TestQuantumSeparation(BaseTestCase):

    def setUp(self):
        super(TestQuantumSeparation, self).setUp()
        self.square = oracles.box([-1.0, -1.0], [1.0, 1.0])
        self.setup = reductions.QuantumSeparationSetup.for_body(self.square)

    def test_setup(self):
        """ The derived delta passes every check with N = 16 """
        setup = self.setup
        self.assertEqual(setup.params.N, 16)
        self.assertLessEqual(setup.params.grid_step, 1.0 / math.sqrt(2.0))
        self.assertLessEqual(setup.evaluations, config.SEPARATION_SWEEP_BUDGET)
        self.assertLess(setup.epsilon, setup.r1 / 4.0)
        self.assertAlmostEqual(setup.epsilon, 7.0 * self.square.kappa * setup.delta)
        self.assertAlmostEqual(setup.r1, config.QUANTUM_SEPARATION_RADIUS)

    def test_infeasible_precisions(self):
        """ Unusable precisions fail before the first membership query """
        for delta in (1e-2, 1e-6, 1e-12, 1e-15):
            literal = 2.0 * math.sqrt(7.0 * self.square.kappa * delta)
            for r1 in (None, literal):
                oracle = oracles.CountedOracle(self.square)
                with self.assertRaises(errors.ParamsInfeasible, msg=(delta, r1)):
                    reductions.separating_halfspace(oracle, [1.2, 0.0], 0.2, delta, self.rng, r1=r1)
                self.assertEqual(oracle.query_count, 0)

    def test_lifted_body(self):
        """ minimize_convex with quantum separation refuses up front on an epigraph """
        body = oracles.CountedOracle(self.square)
        objective = oracles.CountedOracle(oracles.linear_objective([1.0, 0.0], self.square))
        with self.assertRaises(errors.ParamsInfeasible):
            reductions.minimize_convex(body, objective, EPSILON, self.rng, separation=reductions.QUANTUM)
        self.assertEqual(body.query_count, 0)
        self.assertEqual(objective.query_count, 0)

    def test_subgradient_halfspace(self):
        """ Between K and B2(c, R) the cut comes from a non-zero subgradient """
        oracle = oracles.CountedOracle(self.square)
        answer = reductions.separating_halfspace(
            oracle, [1.2, 0.0], FAILURE_PROBABILITY, self.setup.delta, self.rng
        )
        self.assertFalse(answer.inside)

        halfspace = answer.halfspace
        self.assertAllClose(halfspace.normal, [-1.0, 0.0], atol=1e-6)
        self.assertTrue(math.isfinite(halfspace.margin))
        self.assertEqual(halfspace.failure_probability, FAILURE_PROBABILITY)
        self.assertGreater(oracle.query_count, self.setup.evaluations)

        tight = oracles.Halfspace(halfspace.normal, halfspace.anchor)
        points = oracles.grid_points([-1.0, -1.0], [1.0, 1.0], 21)
        self.assertTrue(np.all(tight.contains(points)))

    def test_zero_subgradient(self):
        """ Zero estimates are retried and finally give up """
        oracle = oracles.CountedOracle(self.square)
        zero = mock.Mock(gradient=np.zeros(2))
        with mock.patch.object(subgrad, "quantum_subgradient", return_value=zero) as estimate:
            with self.assertRaises(errors.NoConvergence):
                reductions.separating_halfspace(oracle, [1.2, 0.0], 0.2, self.setup.delta, self.rng)
        self.assertEqual(estimate.call_count, config.QUANTUM_SEPARATION_ATTEMPTS)

    def test_zero_subgradient_retry(self):
        """ A zero estimate is replaced by the next non-zero one """
        oracle = oracles.CountedOracle(self.square)
        zero = mock.Mock(gradient=np.zeros(2))
        slope = mock.Mock(gradient=np.array([0.5, 0.0]))
        with mock.patch.object(subgrad, "quantum_subgradient", side_effect=[zero, slope]) as estimate:
            answer = reductions.separating_halfspace(oracle, [1.2, 0.0], 0.2, self.setup.delta, self.rng)
        self.assertEqual(estimate.call_count, 2)
        self.assertAllClose(answer.halfspace.normal, [-1.0, 0.0])

    def test_zero_classical_subgradient(self):
        """ A zero finite-difference subgradient gives up as well """
        oracle = oracles.CountedOracle(self.square)
        with mock.patch.object(subgrad, "finite_difference_gradient", return_value=np.zeros(2)):
            with self.assertRaises(errors.NoConvergence):
                reductions.classical_separation(oracle, [1.2, 0.0], self.rng)

    def test_separation_procedure(self):
        """ A bound quantum procedure uses the derived setup """
        oracle = oracles.CountedOracle(self.square)
        separate = reductions.separation_procedure(oracle, reductions.QUANTUM)
        self.assertEqual(oracle.query_count, 0)
        answer = separate(np.zeros(2), self.rng)
        self.assertTrue(answer.inside)
        with self.assertRaises(errors.ParamsInfeasible):
            reductions.separation_procedure(oracle, reductions.QUANTUM, delta=1e-6)


class TestSeparationValidity(BaseTestCase):

    def _failures(self, separate, body, p, seeds):
        """Runs whose halfspace cuts off samples of K beyond its margin."""
        failures = 0
        for seed in range(seeds):
            rng = np.random.default_rng(seed)
            answer = separate(p, rng)
            self.assertFalse(answer.inside)
            samples = oracles.sample_body(rng, body, VALIDITY_SAMPLES)
            failures += not np.all(answer.halfspace.contains(samples))
        return failures

    def test_quantum_ball(self):
        """ Far points of the unit ball fail at most rho of the time """
        oracle = oracles.CountedOracle(oracles.ball(2))
        separate = reductions.separation_procedure(oracle, reductions.QUANTUM, rho=FAILURE_PROBABILITY)
        failures = self._failures(separate, oracle.underlying, [1.2, 0.0], VALIDITY_SEEDS)

        expected = FAILURE_PROBABILITY * VALIDITY_SEEDS
        spread = 3.0 * math.sqrt(VALIDITY_SEEDS * FAILURE_PROBABILITY * (1.0 - FAILURE_PROBABILITY))
        self.assertLessEqual(failures, expected + spread)
        self.assertEqual(oracle.count(reductions.SEPARATION), VALIDITY_SEEDS)

    def test_quantum_smoothed_hypercube(self):
        """ Points between SC and B2(c, R) get valid subgradient cuts """
        oracle = oracles.CountedOracle(oracles.smoothed_hypercube([1.0, 1.0], 1.0))
        body = oracle.underlying
        p = np.array([1.05, 0.6])
        self.assertGreater(np.linalg.norm(p - body.center), body.inner_radius)
        self.assertLess(np.linalg.norm(p - body.center), body.outer_radius)

        separate = reductions.separation_procedure(oracle, reductions.QUANTUM, rho=FAILURE_PROBABILITY)
        self.assertEqual(self._failures(separate, body, p, 3), 0)

    def test_classical_smoothed_hypercube(self):
        """ Finite-difference cuts of SC are valid for every seed """
        oracle = oracles.CountedOracle(oracles.smoothed_hypercube([1.0, 1.0], 1.0))
        separate = reductions.separation_procedure(oracle)
        self.assertEqual(self._failures(separate, oracle.underlying, [1.05, 0.6], 20), 0)


class TestEllipsoid(BaseTestCase):

    def test_central_cut(self):
        """ A central cut of the unit disk follows the textbook update """
        ellipsoid = reductions.Ellipsoid([0.0, 0.0], 1.0)
        before = ellipsoid.log_volume()
        self.assertTrue(ellipsoid.cut(np.array([1.0, 0.0]), 0.0))
        self.assertAllClose(ellipsoid.center, [-1.0 / 3.0, 0.0])
        self.assertAllClose(ellipsoid.matrix, np.diag([4.0 / 9.0, 4.0 / 3.0]))
        self.assertLess(ellipsoid.log_volume(), before)

    def test_shallow_cut(self):
        """ Shallow cuts are deepened and still shrink the volume """
        ellipsoid = reductions.Ellipsoid([0.0, 0.0], 1.0)
        before = ellipsoid.log_volume()
        self.assertTrue(ellipsoid.cut(np.array([1.0, 0.0]), 0.9))
        self.assertLess(ellipsoid.log_volume(), before)
        self.assertLess(ellipsoid.center[0], 0.0)

    def test_empty_cut(self):
        """ A cut missing the ellipsoid entirely is reported """
        ellipsoid = reductions.Ellipsoid([0.0, 0.0], 1.0)
        self.assertFalse(ellipsoid.cut(np.array([1.0, 0.0]), -2.0))

    def test_interval(self):
        """ In one dimension a cut shortens the interval """
        ellipsoid = reductions.Ellipsoid([0.0], 1.0)
        self.assertTrue(ellipsoid.cut(np.array([1.0]), 0.5))
        self.assertAllClose(ellipsoid.center, [-0.25])
        self.assertAllClose(ellipsoid.matrix, [[0.75 ** 2]])


class TestOptimization(BaseTestCase):

    def _check(self, report, optimum):
        self.assertTrue(report.converged)
        self.assertGreaterEqual(report.value, optimum - 1e-6)
        self.assertLessEqual(report.value, optimum + 2 * EPSILON)
        self.assertLessEqual(report.lower_bound, report.value)
        log_volumes = report.log_volumes
        self.assertTrue(all(a >= b for a, b in zip(log_volumes, log_volumes[1:])))

    def test_linear_over_ball(self):
        """ min x1 over the unit disk is -1 """
        body = oracles.CountedOracle(oracles.ball(2))
        objective = oracles.CountedOracle(oracles.linear_objective([1.0, 0.0], body.underlying))
        report = reductions.minimize_convex(body, objective, EPSILON, self.rng)
        self._check(report, -1.0)

        self.assertEqual(report.membership_queries, body.query_count)
        self.assertEqual(report.evaluation_queries, objective.query_count)
        self.assertEqual(report.evaluation_queries, report.membership_queries + 1)
        self.assertEqual(report.separation_queries, report.iterations)

    def test_linear_over_shifted_box(self):
        """ min x1 + x2 over [1, 2]^2 is 2 """
        body = oracles.box([1.0, 1.0], [2.0, 2.0])
        report = reductions.minimize_convex(body, oracles.linear_objective([1.0, 1.0], body), EPSILON, self.rng)
        self._check(report, 2.0)
        self.assertAllClose(report.point, [1.0, 1.0], atol=0.1)

    def test_nonsmooth_objective(self):
        """ min |x1| + |x2| over a box around the origin is 0 """
        body = oracles.box([-0.5, -0.5], [1.0, 1.0])
        report = reductions.minimize_convex(body, oracles.abs_sum_objective(2), EPSILON, self.rng)
        self._check(report, 0.0)

    def test_iteration_cap(self):
        """ Hitting the cap raises with the partial report """
        body = oracles.ball(2)
        objective = oracles.linear_objective([1.0, 0.0], body)
        with self.assertRaises(errors.NoConvergence) as context:
            reductions.minimize_convex(body, objective, 1e-9, self.rng, max_iterations=2)

        report = context.exception.report
        self.assertEqual(report.iterations, 2)
        self.assertGreater(report.membership_queries, 0)
        self.assertFalse(report.converged)

    def test_unknown_separation(self):
        """ Only classical and quantum separation exist """
        body = oracles.ball(2)
        with self.assertRaises(errors.ParamError):
            reductions.minimize_convex(body, oracles.linear_objective([1.0, 0.0], body), EPSILON, self.rng, separation="exact")

    def test_radii(self):
        """ optimize_linear needs 0 < r <= R """
        with self.assertRaises(errors.ParamError):
            reductions.optimize_linear(None, [1.0, 0.0], 1.0, 2.0, EPSILON, self.rng)

    def test_linear_quantum(self):
        """ Quantum separation minimizes x1 over [-1, 1]^2 """
        body = oracles.CountedOracle(oracles.box([-1.0, -1.0], [1.0, 1.0]))
        report = reductions.minimize_linear(body, [1.0, 0.0], 0.1, self.rng, separation=reductions.QUANTUM)
        self.assertTrue(report.converged)
        self.assertGreaterEqual(report.value, -1.0 - 1e-9)
        self.assertLessEqual(report.value, -1.0 + 0.2)
        self.assertEqual(report.separation_queries, report.iterations)
        self.assertEqual(report.membership_queries, body.query_count)
        self.assertEqual(report.evaluation_queries, 0)

    def test_linear_rescaled(self):
        """ minimize_linear reports the value of c itself, not of c / |c| """
        body = oracles.ball(2)
        report = reductions.minimize_linear(body, [3.0, 4.0], EPSILON, self.rng)
        self._check(report, -5.0)
        with self.assertRaises(errors.ParamError):
            reductions.minimize_linear(body, [0.0, 0.0], EPSILON, self.rng)

    def test_linear_direction(self):
        """ Only linear objectives expose their direction """
        body = oracles.ball(2)
        self.assertAllClose(reductions.linear_direction(oracles.linear_objective([1.0, -2.0], body)), [1.0, -2.0])
        self.assertIsNone(reductions.linear_direction(oracles.abs_sum_objective(2)))

    def test_smoothed_hypercube_brute_force(self):
        """ optimize_linear over SC_{1, 1} matches a grid search """
        body = oracles.smoothed_hypercube([1.0, 1.0], 1.0)
        c = np.array([1.0, 1.0]) / math.sqrt(2.0)
        separate = reductions.separation_procedure(oracles.CountedOracle(body))
        report = reductions.optimize_linear(
            separate, c, body.outer_radius, body.inner_radius, EPSILON, self.rng, center=body.center
        )
        self.assertTrue(report.converged)

        grid = oracles.grid_points([0.0, 0.0], [1.0, 1.0], 201)
        brute = min(float(c @ point) for point in grid if body.contains(point))
        self.assertGreaterEqual(report.value, brute - 0.01)
        self.assertLessEqual(report.value, brute + EPSILON)

    def test_max_norm_over_cube(self):
        """ min f_c over [0, 1]^2 is 0, attained at c """
        for hidden in ("00", "01", "10", "11"):
            instance = families.build_instance("max_norm", self.rng, n=2, c=hidden)
            report = reductions.minimize_convex(instance.body, instance.objective, EPSILON / 2.0, self.rng)
            self.assertTrue(report.converged)
            self.assertLessEqual(abs(report.value), EPSILON)
            target = instance.hidden["c"]
            self.assertLessEqual(np.max(np.abs(report.point - target)), EPSILON)
