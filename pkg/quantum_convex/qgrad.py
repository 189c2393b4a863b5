"""Statevector simulation of the QFT-based gradient estimator.

Note:
    A register holds b qubits, i.e. N = 2^b basis states x = 0..N-1. The
    estimator works over the shifted group G = {-N/2, ..., N/2 - 1} with
    gamma(x) = x - N/2. The n registers of a PhaseState are the axes of its
    amplitude tensor; register i encodes the i-th coordinate.

    The phase oracle is realized by writing the phases straight into the
    amplitudes. This produces the same state as phase kickback with an
    ancilla register in the Fourier state, at a fraction of the cost.

    Two counters are kept on the evaluation oracle: one logical phase query
    per estimate, plus the N^n raw evaluation calls a classical simulation
    needs to build that phase state.

Example:
    ::

        import numpy as np
        import quantum_convex as qc

        objective = qc.oracles.linear_objective([0.5], qc.oracles.ball(1))
        oracle = qc.oracles.CountedOracle(objective)
        params = qc.qgrad.GradParams.for_register_width(1, 1.0, 1e-3, 3)
        qc.qgrad.gradient_estimate(
            oracle, params.epsilon, 1.0, params.beta, [0.0], np.random.default_rng(1)
        )  # array([0.5])
"""


# IMPORTS ---
# Python imports
import csv
import math

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import oracles


# CONSTANTS ---
STATE_NORM_TOLERANCE = config.STATE_NORM_TOLERANCE
FAILURE_RADIUS = 1500.0  # Per-coordinate failure threshold, in sqrt(n eps beta).
EXPECTED_L1_ERROR = 3000.0  # Expected L1 error bound, in n^1.5 sqrt(eps beta).
MAJORITY_WINDOW = 3000.0  # Width of the majority window, in sqrt(n eps beta).
REPETITION_TARGET = 750.0  # Right-hand side of the repetition bound.


class GradParams(object):
    """Derived constants of one gradient estimate.

    Note:
        * l = 2 sqrt(eps / (n beta)): side length of the evaluation grid.
        * N = 2^b with 24 pi sqrt(n eps beta)/L <= 1/N <= 48 pi sqrt(n eps beta)/L
        * N0 = 2^b0 with N eps/(2 L l) <= 1/N0 <= N eps/(L l)
    """

    def __init__(self, n, lipschitz, beta, epsilon):
        """GradParams-class constructor.

        Args:
            n (int): Dimension.
            lipschitz (float): Lipschitz bound L.
            beta (float): Smoothness bound.
            epsilon (float): Evaluation error eps.

        Raises:
            ParamError: If an input is not positive.
            ParamsInfeasible: If no register width b >= 1 exists.
        """
        for name, value in (("n", n), ("L", lipschitz), ("beta", beta), ("eps", epsilon)):
            if not value > 0:
                msg = "Gradient parameter {0} must be positive, got {1}!".format(
                    name, value
                )
                raise errors.ParamError(msg)

        self.n = int(n)
        self.lipschitz = float(lipschitz)
        self.beta = float(beta)
        self.epsilon = float(epsilon)
        self.l = 2.0 * math.sqrt(self.epsilon / (self.n * self.beta))

        scale = self.scale
        lower = 24.0 * math.pi * scale / self.lipschitz
        upper = 48.0 * math.pi * scale / self.lipschitz
        self.b = _smallest_exponent(1.0 / upper)
        if self.b < 1:
            msg = (
                "No b >= 1 satisfies 24*pi*sqrt(n*eps*beta)/L = {0:.6g} <= 1/2^b "
                "<= 48*pi*sqrt(n*eps*beta)/L = {1:.6g}; eps is too large for "
                "L={2}, beta={3}, n={4}!"
            ).format(lower, upper, self.lipschitz, self.beta, self.n)
            raise errors.ParamsInfeasible(msg)
        self.N = 2 ** self.b

        phase_upper = self.N * self.epsilon / (self.lipschitz * self.l)
        self.b0 = max(_smallest_exponent(1.0 / phase_upper), 0)
        self.N0 = 2 ** self.b0

    def __repr__(self):
        return "GradParams(n={0}, l={1:.6g}, b={2}, b0={3})".format(
            self.n, self.l, self.b, self.b0
        )

    @classmethod
    def for_register_width(cls, n, lipschitz, beta, b):
        """Choose eps so that the derived register width is exactly b.

        Note:
            eps is placed in the middle of its admissible range, at
            sqrt(n eps beta) = L / (36 pi 2^b).

        Args:
            n (int): Dimension.
            lipschitz (float): Lipschitz bound L.
            beta (float): Smoothness bound.
            b (int): Wanted bits per register.

        Returns:
            GradParams: Parameters with N = 2^b.
        """
        scale = lipschitz / (36.0 * math.pi * 2 ** b)
        return cls(n, lipschitz, beta, scale ** 2 / (n * beta))

    @property
    def scale(self):
        """sqrt(n eps beta), the unit of all error bounds."""
        return math.sqrt(self.n * self.epsilon * self.beta)

    @property
    def state_size(self):
        """Number of amplitudes N^n of the phase state."""
        return self.N ** self.n

    @property
    def grid_step(self):
        """Distance 2L/N between neighboring gradient estimates."""
        return 2.0 * self.lipschitz / self.N

    def check_inequalities(self):
        """Check both defining interval conditions.

        Returns:
            bool: True if N and N0 satisfy their intervals.
        """
        s = self.scale
        L = self.lipschitz
        tolerance = 1e-12
        b_ok = (
            24.0 * math.pi * s / L <= 1.0 / self.N * (1 + tolerance)
            and 1.0 / self.N <= 48.0 * math.pi * s / L * (1 + tolerance)
        )
        ratio = self.N * self.epsilon / (L * self.l)
        b0_ok = (
            ratio / 2.0 <= 1.0 / self.N0 * (1 + tolerance)
            and 1.0 / self.N0 <= ratio * (1 + tolerance)
        )
        return b_ok and b0_ok


def _smallest_exponent(value):
    """Smallest integer k with 2^k >= value, robust to float noise."""
    return int(math.ceil(math.log2(value) - 1e-9))


def derive_grad_params(n, lipschitz, beta, epsilon):
    """Derive grid size and register widths of one gradient estimate.

    Args:
        n (int): Dimension.
        lipschitz (float): Lipschitz bound L.
        beta (float): Smoothness bound.
        epsilon (float): Evaluation error eps.

    Raises:
        ParamsInfeasible: If L <= 48 pi sqrt(n eps beta).

    Returns:
        GradParams: The derived constants.
    """
    params = GradParams(n, lipschitz, beta, epsilon)
    LOG.info("Derived %s", params)
    return params


# STATES ---
class PhaseState(object):
    """Amplitudes of n registers of b qubits each.

    Note:
        amplitudes is the flat vector of length N^n; tensor is a view with one
        axis per register.
    """

    def __init__(self, amplitudes, n, b):
        self.n = int(n)
        self.b = int(b)
        self.amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if self.amplitudes.size != self.N ** self.n:
            msg = "{0} amplitudes don't fit {1} registers of {2} bits!".format(
                self.amplitudes.size, self.n, self.b
            )
            raise errors.ParamError(msg)

    def __repr__(self):
        return "PhaseState(n={0}, b={1}, norm={2:.12f})".format(
            self.n, self.b, self.norm()
        )

    @property
    def N(self):
        return 2 ** self.b

    @property
    def tensor(self):
        return self.amplitudes.reshape((self.N,) * self.n)

    def copy(self):
        return PhaseState(self.amplitudes.copy(), self.n, self.b)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self):
        return abs(self.norm() - 1.0) <= STATE_NORM_TOLERANCE

    def is_pure_phase(self):
        """Check that every amplitude has modulus N^(-n/2)."""
        modulus = self.N ** (-self.n / 2.0)
        return bool(np.all(np.abs(np.abs(self.amplitudes) - modulus) <= STATE_NORM_TOLERANCE))


def check_budget(N, n):
    """Raise StateTooLarge if N^n amplitudes exceed the budget."""
    budget = config.statevector_budget()
    if N ** n > budget:
        msg = "A state of {0} registers of size {1} needs {2} amplitudes, budget is {3}!".format(
            n, N, N ** n, budget
        )
        raise errors.StateTooLarge(msg)


def group_elements(N):
    """The shifted group G = {-N/2, ..., N/2 - 1} in register order."""
    return np.arange(N) - N // 2


def grid_offsets(params):
    """Grid coordinates of all basis states, in amplitude order.

    Returns:
        numpy.ndarray: Array of shape (N^n, n) holding gamma(x) per register.
    """
    gamma = group_elements(params.N)
    mesh = np.meshgrid(*([gamma] * params.n), indexing="ij")
    return np.stack([axis.reshape(-1) for axis in mesh], axis=1)


def rounded_phases(f, params, x0):
    """F-tilde of every grid point, using one sweep of the evaluation oracle.

    Note:
        F(g) = N/(2 L l) [f(x0 + (l/N) g) - f(x0)], rounded to the nearest
        multiple of 1/N0 (ties to even). f(x0) is the grid point g = 0, so
        the sweep makes exactly N^n raw evaluation queries.

    Args:
        f (CountedOracle): Evaluation oracle.
        params (GradParams): Derived constants.
        x0 (iterable): Center of the grid.

    Returns:
        numpy.ndarray: F-tilde per basis state, flat, in amplitude order.
    """
    x0 = oracles.as_point(x0, params.n)
    offsets = grid_offsets(params)
    points = x0 + (params.l / params.N) * offsets
    values = oracles.query_evaluation_sweep(f, points)

    origin = np.ravel_multi_index((params.N // 2,) * params.n, (params.N,) * params.n)
    scale = params.N / (2.0 * params.lipschitz * params.l)
    exact = scale * (values - values[origin])
    return np.round(exact * params.N0) / params.N0


def phase_state(f, params, x0):
    """Build N^(-n/2) sum_x exp(2 pi i F-tilde(x)) |x>.

    Note:
        Counts one logical phase query on f.

    Args:
        f (CountedOracle): Evaluation oracle.
        params (GradParams): Derived constants.
        x0 (iterable): Point the gradient is estimated at.

    Raises:
        StateTooLarge: If N^n exceeds the statevector budget.

    Returns:
        PhaseState: The phase state before any Fourier transform.
    """
    check_budget(params.N, params.n)
    phases = rounded_phases(f, params, x0)
    amplitudes = np.exp(2j * np.pi * phases) * params.N ** (-params.n / 2.0)
    f.increment(oracles.PHASE)
    return PhaseState(amplitudes, params.n, params.b)


def ideal_state(gradient, params):
    """The idealized state N^(-n/2) sum_x exp(2 pi i g.gamma(x) / (2L)) |x>."""
    check_budget(params.N, params.n)
    gradient = oracles.as_point(gradient, params.n)
    phases = grid_offsets(params) @ gradient / (2.0 * params.lipschitz)
    amplitudes = np.exp(2j * np.pi * phases) * params.N ** (-params.n / 2.0)
    return PhaseState(amplitudes, params.n, params.b)


# FOURIER TRANSFORMS ---
def global_phase(N):
    """The phase exp(-i pi N / 2) relating QFT_G to the conjugated QFT_N."""
    return np.exp(-1j * np.pi * N / 2.0)


def qft_g_inverse_matrix(N):
    """Inverse QFT over G built from its definition.

    Returns:
        numpy.ndarray: Matrix with entries exp(-2 pi i gamma(x) gamma(y) / N) / sqrt(N).
    """
    gamma = group_elements(N)
    return np.exp(-2j * np.pi * np.outer(gamma, gamma) / N) / np.sqrt(N)


def shifted_inverse_qft_matrix(N):
    """exp(-i pi N/2) U QFT_N^-1 U with U = diag(exp(i pi x)).

    Note:
        QFT_N^-1 follows the numpy.fft sign convention,
        entries exp(-2 pi i x y / N) / sqrt(N).
    """
    unitary = np.diag(np.exp(1j * np.pi * np.arange(N)))
    inverse_qft = np.fft.fft(np.eye(N), axis=0, norm="ortho")
    return global_phase(N) * unitary @ inverse_qft @ unitary


def inverse_qft_G(state, register):
    """Apply the inverse QFT over G to one register.

    Args:
        state (PhaseState): Input state; left unchanged.
        register (int): Register index, 0 <= register < n.

    Raises:
        ParamError: If register is out of range.

    Returns:
        PhaseState: The transformed state.
    """
    if not 0 <= register < state.n:
        msg = "Register {0} doesn't exist in a state with {1} registers!".format(
            register, state.n
        )
        raise errors.ParamError(msg)

    N = state.N
    shape = [1] * state.n
    shape[register] = N
    signs = np.exp(1j * np.pi * np.arange(N)).reshape(shape)

    tensor = state.tensor * signs
    tensor = np.fft.fft(tensor, axis=register, norm="ortho")
    tensor = global_phase(N) * signs * tensor
    return PhaseState(tensor, state.n, state.b)


def outcome_distribution(state):
    """Probabilities of all joint measurement outcomes.

    Returns:
        numpy.ndarray: Tensor of shape (N,) * n; axis i is register i.
    """
    probabilities = np.abs(state.tensor) ** 2
    return probabilities / probabilities.sum()


def sample_outcome(probabilities, rng):
    """Draw one joint outcome by cumulative inversion.

    Args:
        probabilities (numpy.ndarray): Tensor as from outcome_distribution.
        rng (numpy.random.Generator): Seeded generator.

    Returns:
        numpy.ndarray: Outcome k per register, as elements of G.
    """
    flat = probabilities.reshape(-1)
    cumulative = np.cumsum(flat)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    index = min(index, flat.size - 1)
    registers = np.unravel_index(index, probabilities.shape)
    N = probabilities.shape[0]
    return np.array(registers) - N // 2


def gradient_distribution(f, params, x0):
    """Outcome distribution of one gradient estimate at x0.

    Returns:
        numpy.ndarray: Tensor of shape (N,) * n over outcomes in G^n.
    """
    state = phase_state(f, params, x0)
    for register in range(params.n):
        state = inverse_qft_G(state, register)
    return outcome_distribution(state)


def _check_precision(f, epsilon):
    if f.precision > epsilon:
        msg = "Oracle precision {0} exceeds eps={1}!".format(f.precision, epsilon)
        raise errors.ParamError(msg)


def gradient_estimate(f, epsilon, lipschitz, beta, x0, rng, params=None):
    """Estimate the gradient of f at x0 with one phase query.

    Args:
        f (CountedOracle): Evaluation oracle with precision <= eps.
        epsilon (float): Evaluation error eps.
        lipschitz (float): Lipschitz bound L.
        beta (float): Smoothness bound.
        x0 (iterable): Point of the estimate.
        rng (numpy.random.Generator): Seeded generator for the measurement.
        params (GradParams): Precomputed constants; derived when None.

    Raises:
        ParamsInfeasible: If the constants can't be derived.
        StateTooLarge: If N^n exceeds the statevector budget.

    Returns:
        numpy.ndarray: g-tilde = (2L/N) k.
    """
    _check_precision(f, epsilon)
    if params is None:
        params = derive_grad_params(f.dimension, lipschitz, beta, epsilon)

    probabilities = gradient_distribution(f, params, x0)
    outcome = sample_outcome(probabilities, rng)
    estimate = params.grid_step * outcome
    LOG.debug("Gradient estimate at %s: %s", x0, estimate)
    return estimate


def repetitions_for(n, lipschitz, beta, epsilon):
    """Smallest T >= 1 with 2 exp(-T^2/24) <= 750 sqrt(n eps beta) / L.

    Note:
        Pure arithmetic, so it also serves for dimensions far beyond any
        simulation.

    Returns:
        int: Number of gradient estimates per smoothed gradient.
    """
    target = REPETITION_TARGET * math.sqrt(n * epsilon * beta) / lipschitz
    if target >= 2.0:
        return 1
    return max(1, int(math.ceil(math.sqrt(24.0 * math.log(2.0 / target)) - 1e-12)))


def majority_median(values, width):
    """Median of the largest cluster of values within a window of given width.

    Args:
        values (iterable): Estimates of one coordinate.
        width (float): Window width.

    Returns:
        float or None: The median of the points in the first window holding
            more than half of the values, None if no window does.
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    count = ordered.size
    best_start, best_size = 0, 0
    end = 0
    for start in range(count):
        end = max(end, start)
        while end < count and ordered[end] - ordered[start] <= width:
            end += 1
        if end - start > best_size:
            best_start, best_size = start, end - start

    if best_size * 2 <= count:
        return None
    return float(np.median(ordered[best_start:best_start + best_size]))


def combine_estimates(estimates, width, lipschitz):
    """Coordinate-wise majority median of repeated estimates, clamped to [-L, L].

    Args:
        estimates (numpy.ndarray): Array of shape (T, n).
        width (float): Majority window width.
        lipschitz (float): Clamp bound L.

    Returns:
        numpy.ndarray: Combined estimate; 0 where no majority exists.
    """
    estimates = np.atleast_2d(estimates)
    combined = np.zeros(estimates.shape[1])
    for index in range(estimates.shape[1]):
        median = majority_median(estimates[:, index], width)
        if median is None:
            LOG.debug("No majority window for coordinate %s, using 0", index)
            continue
        combined[index] = median
    return np.clip(combined, -lipschitz, lipschitz)


def smooth_quantum_gradient(f, epsilon, lipschitz, beta, x, rng):
    """Repeat gradient_estimate T times and combine by majority median.

    Args:
        f (CountedOracle): Evaluation oracle with precision <= eps.
        epsilon (float): Evaluation error eps.
        lipschitz (float): Lipschitz bound L.
        beta (float): Smoothness bound.
        x (iterable): Point of the estimate.
        rng (numpy.random.Generator): Seeded generator.

    Returns:
        numpy.ndarray: g-tilde with |g-tilde_i| <= L.
    """
    _check_precision(f, epsilon)
    params = derive_grad_params(f.dimension, lipschitz, beta, epsilon)
    repetitions = repetitions_for(params.n, lipschitz, beta, epsilon)
    LOG.info("Smooth gradient at %s with T=%s repetitions", x, repetitions)

    check_budget(params.N, params.n)
    estimates = np.array([
        gradient_estimate(f, epsilon, lipschitz, beta, x, rng, params=params)
        for _ in range(repetitions)
    ])
    width = MAJORITY_WINDOW * params.scale
    return combine_estimates(estimates, width, lipschitz)


# DIAGNOSTICS ---
def state_distance_diagnostic(f, gradient, params, x0):
    """Distance between the actual and the idealized phase state.

    Args:
        f (CountedOracle): Evaluation oracle.
        gradient (iterable): Analytic gradient of f at x0.
        params (GradParams): Derived constants.
        x0 (iterable): Point of the estimate.

    Raises:
        StateTooLarge: If N^n exceeds the statevector budget.

    Returns:
        tuple: (two_norm_gap, trace_distance); trace_distance is
            2 sqrt(1 - |<psi|phi>|^2).
    """
    actual = phase_state(f, params, x0)
    ideal = ideal_state(gradient, params)
    gap = float(np.linalg.norm(actual.amplitudes - ideal.amplitudes))
    overlap = abs(np.vdot(ideal.amplitudes, actual.amplitudes)) ** 2
    trace_distance = 2.0 * math.sqrt(max(0.0, 1.0 - overlap))
    return gap, trace_distance


def marginal(probabilities, register):
    """Outcome distribution of a single register."""
    axes = tuple(axis for axis in range(probabilities.ndim) if axis != register)
    return probabilities.sum(axis=axes) if axes else probabilities


def phase_estimation_tail(probabilities, exact_k, width, register=0):
    """Probability that register's outcome lies more than width from exact_k.

    Note:
        For phase estimation this tail is below 1/(2(width - 1)).

    Args:
        probabilities (numpy.ndarray): Tensor as from outcome_distribution.
        exact_k (float): N g_i / (2L), the outcome an ideal run would give.
        width (float): Allowed distance.
        register (int): Register to inspect.

    Returns:
        float: Tail probability.
    """
    register_probabilities = marginal(probabilities, register)
    N = register_probabilities.size
    outcomes = group_elements(N)
    return float(register_probabilities[np.abs(outcomes - exact_k) > width].sum())


def dump_distribution_csv(file_path, probabilities):
    """Write an outcome distribution as CSV.

    Note:
        Columns are k_1 .. k_n (outcomes in G) and probability. Rows follow
        amplitude order.

    Args:
        file_path (str): Output path.
        probabilities (numpy.ndarray): Tensor as from outcome_distribution.
    """
    n = probabilities.ndim
    N = probabilities.shape[0]
    with open(file_path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(["k_{0}".format(index + 1) for index in range(n)] + ["probability"])
        for index, probability in np.ndenumerate(probabilities):
            outcome = [value - N // 2 for value in index]
            writer.writerow(outcome + [repr(float(probability))])

    LOG.info("Wrote outcome distribution to %s", file_path)
