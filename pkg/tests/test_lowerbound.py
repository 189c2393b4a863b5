"""
Unit tests for quantum_convex.lowerbound
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# IMPORTS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Python imports
import itertools
import math

# Third party imports
import numpy as np

# Local imports
from base import BaseTestCase
from quantum_convex import errors
from quantum_convex import lowerbound
from quantum_convex import oracles
from quantum_convex import reductions


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# GLOBALS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# Interval ends of C_s and points between them.
SUM_COORDS_VALUES = (-2.5, -2.0, -1.5, -1.0, 0.0, 1.0, 1.5, 2.0, 2.5)
QUARTERS = (0.0, 0.25, 0.5, 0.75, 1.0)
RECOVERY_EPSILON = 1.0 / 3.0

# x with 1 - x3 >= x1 >= x2 >= 1 - x2 >= 1 - x1 >= x3.
WORKED_POINT = [0.7, 0.6, 0.1]
WORKED_CASES = {
    6.0 / 7.0: 1.0 - 0.1,
    5.0 / 7.0: 0.7,
    4.0 / 7.0: 0.6,
    3.0 / 7.0: 1.0 - 0.6,
}


def all_strings(n):
    return [np.array(bits) for bits in itertools.product((0, 1), repeat=n)]


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# TESTS
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~


class TestWildcards(BaseTestCase):

    def test_query(self):
        """ Q_s(T, y) compares s on T only """
        instance = lowerbound.WildcardInstance([1, 0, 1])
        self.assertEqual(lowerbound.wildcard_query(instance, [0, 2], [1, 1]), 1)
        self.assertEqual(lowerbound.wildcard_query(instance, [1], [1]), 0)
        self.assertEqual(lowerbound.wildcard_query(instance, [], []), 1)
        self.assertEqual(instance.query_count, 3)

    def test_arity(self):
        """ |T| and |y| must agree and T must stay in range """
        instance = lowerbound.WildcardInstance([1, 0, 1])
        with self.assertRaises(errors.ArityError):
            lowerbound.wildcard_query(instance, [0, 1], [1])
        with self.assertRaises(errors.ArityError):
            lowerbound.wildcard_query(instance, [3], [1])
        self.assertEqual(instance.query_count, 0)

    def test_bits_only(self):
        """ Hidden strings hold bits """
        with self.assertRaises(errors.ParamError):
            lowerbound.WildcardInstance([0, 2])

    def test_classical_driver(self):
        """ n singleton queries recover every string """
        for n in range(1, 5):
            for hidden in all_strings(n):
                instance = lowerbound.WildcardInstance(hidden)
                self.assertAllClose(lowerbound.classical_wildcard_driver(instance), hidden)
                self.assertEqual(instance.query_count, n)

    def test_from_rng(self):
        """ Random instances have the requested length """
        instance = lowerbound.WildcardInstance.from_rng(6, self.rng)
        self.assertEqual(instance.n, 6)


class TestSumCoords(BaseTestCase):

    def test_faithful_membership(self):
        """ One wildcard query decides membership in prod [s_i - 2, s_i + 1] """
        for n in range(1, 4):
            for hidden in all_strings(n):
                instance = lowerbound.WildcardInstance(hidden)
                for point in itertools.product(SUM_COORDS_VALUES, repeat=n):
                    point = np.array(point)
                    expected = np.all((hidden - 2 <= point) & (point <= hidden + 1))
                    before = instance.query_count
                    answer = lowerbound.sum_coords_membership(instance, point)
                    self.assertEqual(answer, int(expected))
                    self.assertLessEqual(instance.query_count - before, 1)

    def test_body(self):
        """ The body keeps its wildcard instance and contains its inner ball """
        instance = lowerbound.WildcardInstance([0, 1])
        body = lowerbound.sum_coords_body(instance)
        self.assertIs(body.wildcard, instance)
        self.assertTrue(body.check_containment(self.rng, samples=200))

    def test_rounding(self):
        """ The minimizer s - 2 rounds back to s """
        for hidden in all_strings(3):
            recovered = lowerbound.round_sgn(hidden - 2.0, lowerbound.SUM_COORDS_THRESHOLD)
            self.assertAllClose(recovered, hidden)

    def test_smoothed_body(self):
        """ SC_{s+1, 3} touches the faces of C_s but not its corners """
        body = lowerbound.smoothed_sum_coords_body([0, 1])
        self.assertTrue(body.contains([0.0, 1.0]))
        self.assertTrue(body.contains([-2.0, 0.5]))
        self.assertFalse(body.contains([-2.0, -1.0]))
        self.assertFalse(body.contains([3.0, 3.0]))

    def test_recovery(self):
        """ An eps-minimizer of sum(x) over C_s reveals s """
        for hidden in all_strings(2):
            instance = lowerbound.WildcardInstance(hidden, "sum_coords")
            body = oracles.CountedOracle(lowerbound.sum_coords_body(instance))
            objective = oracles.CountedOracle(lowerbound.sum_coords_objective(body.underlying))
            report = reductions.minimize_convex(body, objective, RECOVERY_EPSILON, self.rng)

            recovered = lowerbound.round_sgn(report.point, lowerbound.SUM_COORDS_THRESHOLD)
            self.assertAllClose(recovered, hidden)
            self.assertLessEqual(instance.query_count, body.query_count)


class TestMaxNorm(BaseTestCase):

    def test_values(self):
        """ f_c vanishes only at c """
        c = np.array([1, 0, 1])
        self.assertEqual(lowerbound.max_norm_eval(c, c), 0.0)
        self.assertAlmostEqual(lowerbound.max_norm_eval(c, [0.5, 0.5, 0.5]), 0.5)
        self.assertAlmostEqual(lowerbound.max_norm_eval(c, [1.5, 0.0, 1.0]), 0.5)
        for _ in range(50):
            x = self.rng.uniform(-1.0, 2.0, size=3)
            self.assertGreater(lowerbound.max_norm_eval(c, x), 0.0)

    def test_convexity(self):
        """ f_c at a midpoint is below the average of its ends """
        for _ in range(200):
            c = self.rng.integers(0, 2, size=3)
            x, y = self.rng.uniform(-1.0, 2.0, size=(2, 3))
            middle = lowerbound.max_norm_eval(c, (x + y) / 2.0)
            average = (lowerbound.max_norm_eval(c, x) + lowerbound.max_norm_eval(c, y)) / 2.0
            self.assertLessEqual(middle, average + 1e-12)

    def test_faithful_decision(self):
        """ One wildcard query decides f_c(x) <= t on [0, 1]^n """
        for n in range(1, 4):
            for hidden in all_strings(n):
                instance = lowerbound.WildcardInstance(hidden)
                for point in itertools.product(QUARTERS, repeat=n):
                    for t in QUARTERS:
                        expected = lowerbound.max_norm_eval(hidden, point) <= t
                        before = instance.query_count
                        answer = lowerbound.max_norm_decision_via_wildcard(instance, point, t)
                        self.assertEqual(answer, int(expected))
                        self.assertLessEqual(instance.query_count - before, 1)

    def test_decision_domain(self):
        """ Decisions are made on the unit cube only """
        instance = lowerbound.WildcardInstance([1])
        with self.assertRaises(errors.DomainError):
            lowerbound.max_norm_decision_via_wildcard(instance, [0.5], 1.5)
        with self.assertRaises(errors.DomainError):
            lowerbound.max_norm_decision_via_wildcard(instance, [1.5], 0.5)

    def test_eval_via_wildcard(self):
        """ bits decisions give f_c to 2^-bits on all of R^n """
        instance = lowerbound.MaxNormInstance([0, 1, 1])
        for _ in range(50):
            x = self.rng.uniform(-1.0, 2.0, size=3)
            before = instance.wildcard.query_count
            value = lowerbound.max_norm_eval_via_wildcard(instance, x, 10)
            self.assertLessEqual(abs(value - instance(x)), 2.0 ** -10)
            self.assertLessEqual(instance.wildcard.query_count - before, 10)

    def test_projection(self):
        """ pi clips to the unit cube and the penalty sums what was cut """
        x = [-0.5, 0.25, 1.75]
        self.assertAllClose(lowerbound.project_unit(x), [0.0, 0.25, 1.0])
        self.assertAlmostEqual(lowerbound.projection_penalty(x), 1.25)
        self.assertEqual(lowerbound.projection_penalty([0.0, 1.0]), 0.0)

    def test_binary_search_bits(self):
        """ At least one decision is needed """
        with self.assertRaises(errors.ParamError):
            lowerbound.binary_search_eval(lambda x, t: 1, [0.5], 0)

    def test_solve(self):
        """ n evaluations of f_c recover c """
        for n in range(1, 5):
            for hidden in all_strings(n):
                oracle = oracles.CountedOracle(lowerbound.MaxNormInstance(hidden).objective())
                recovered, queries = lowerbound.solve_max_norm_via_wildcards(oracle)
                self.assertAllClose(recovered, hidden)
                self.assertEqual(queries, n)
                self.assertEqual(oracle.query_count, n)

    def test_solve_plain_function(self):
        """ Uncounted functions also give the (c, queries) pair """
        result = lowerbound.solve_max_norm_via_wildcards(lambda x: lowerbound.max_norm_eval([1, 0], x), n=2)
        self.assertIsInstance(result, tuple)
        recovered, queries = result
        self.assertAllClose(recovered, [1, 0])
        self.assertEqual(queries, 2)

    def test_probe_contract(self):
        """ Probe values other than 0, 1/2, 1 break the reduction """
        with self.assertRaises(errors.ContractViolation):
            lowerbound.solve_max_norm_via_wildcards(lambda x: 0.3, n=2)


class TestDiscretization(BaseTestCase):

    def test_worked_ord(self):
        """ sigma = (3, 1, 2), b3 = 0, b1 = 1, b2 = 1 """
        b, sigma = lowerbound.ord_(WORKED_POINT)
        self.assertEqual(sigma.tolist(), [2, 0, 1])
        self.assertEqual(b.tolist(), [1, 1, 0])

    def test_worked_point(self):
        """ x* = (5/7, 4/7, 1/7) """
        trace = lowerbound.discretize(WORKED_POINT, lambda x: 6.0 / 7.0)
        self.assertAllClose(trace.x_star, [5.0 / 7.0, 4.0 / 7.0, 1.0 / 7.0])

    def test_worked_cases(self):
        """ Each feasible oracle answer selects its coordinate expression """
        for answer, expected in WORKED_CASES.items():
            trace = lowerbound.discretize(WORKED_POINT, lambda x, answer=answer: answer)
            self.assertAlmostEqual(trace.value, expected)
            self.assertIn(trace.k_star, (1, 2, 3, 4))

    def test_off_contract(self):
        """ Rounded k* outside 1..n+1 is reported """
        for answer in (1.0, 0.0):
            with self.assertRaises(errors.ContractViolation):
                lowerbound.discretize(WORKED_POINT, lambda x, answer=answer: answer)

    def test_discrete_set(self):
        """ D_n has 2^n n! points on the (2n+1)-grid """
        for n in range(1, 4):
            points = lowerbound.discrete_set(n)
            self.assertEqual(len(points), 2 ** n * math.factorial(n))
            scaled = points * (2 * n + 1)
            self.assertAllClose(scaled, np.round(scaled), atol=1e-9)
            self.assertTrue(np.all((points > 0.0) & (points < 1.0)))

    def test_chi_permutation(self):
        """ chi takes ranks 1..n """
        with self.assertRaises(errors.ParamError):
            lowerbound.chi([0, 1], [0, 1])

    def test_order_preserved(self):
        """ x* orders like x """
        for _ in range(100):
            x = self.rng.random(4)
            b, sigma = lowerbound.ord_(x)
            x_star = lowerbound.chi(b, lowerbound.inverse_ranks(sigma))
            b_star, sigma_star = lowerbound.ord_(x_star)
            self.assertEqual(b.tolist(), b_star.tolist())
            self.assertEqual(sigma.tolist(), sigma_star.tolist())

    def test_noisy_oracle(self):
        """ One evaluation off by 1/(5n+1) still gives the exact f_c(x) """
        for n in range(2, 5):
            noise = oracles.NoisePolicy.additive(1.0 / (5 * n + 1))
            for _ in range(30):
                instance = lowerbound.MaxNormInstance.from_rng(n, self.rng)
                oracle = oracles.CountedOracle(
                    instance.objective(), precision=1.0 / (5 * n), noise_policy=noise
                )
                x = self.rng.random(n)
                value = lowerbound.discretized_eval(x, oracle)
                self.assertAlmostEqual(value, instance(x), places=12)
                self.assertEqual(oracle.query_count, 1)


class TestCombined(BaseTestCase):

    def test_instance(self):
        """ The minimizer (s - 2, c) has value sum(s - 2) """
        body, objective = lowerbound.combined_instance([1, 0], [0, 1])
        minimizer = np.array([-1.0, -2.0, 0.0, 1.0])
        self.assertTrue(oracles.query_membership(body, minimizer))
        self.assertAlmostEqual(oracles.query_evaluation(objective, minimizer), -3.0)
        self.assertAlmostEqual(objective.underlying.lower_bound, -3.0)
        self.assertEqual(body.underlying.wildcard.query_count, 1)

    def test_lengths(self):
        """ s and c must have equal length """
        with self.assertRaises(errors.ParamError):
            lowerbound.combined_instance([1, 0], [1])

    def test_recovery(self):
        """ An eps-minimizer reveals both hidden strings """
        for s in all_strings(2):
            for c in all_strings(2):
                body, objective = lowerbound.combined_instance(s, c)
                report = reductions.minimize_convex(body, objective, RECOVERY_EPSILON, self.rng)
                recovered_s, recovered_c = lowerbound.recover_combined(report.point, 2)
                self.assertAllClose(recovered_s, s)
                self.assertAllClose(recovered_c, c)
