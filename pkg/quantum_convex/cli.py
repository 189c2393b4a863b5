"""Command-line interface of the QuantumConvex experiment harness.

Note:
    Every subcommand runs seeded trials and writes one CSV file. The first
    two lines are comments holding the artifact version and the merged
    config as JSON; summary values follow the rows as "# summary" comments.
    Rows are sorted before writing, so the output does not depend on the
    number of workers.

    Exit codes: 0 success, 2 usage or bad parameters, 3 an optimization did
    not converge, 4 an oracle or reduction broke its contract.

Example:
    ::

        quantum-convex optimize --family sum_coords --n 3 --epsilon 0.05
        quantum-convex gradest --config runs/gradest.json --trials 300 --out g.csv
        python -m quantum_convex lowerbound --n 2 --reductions combined
"""


# IMPORTS ---
# Python imports
import argparse
import concurrent.futures
import csv
import itertools
import math
import sys

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import __version__
from quantum_convex import config
from quantum_convex import errors
from quantum_convex import families
from quantum_convex import logger
from quantum_convex import lookup_table
from quantum_convex import lowerbound
from quantum_convex import oracles
from quantum_convex import qgrad
from quantum_convex import reductions
from quantum_convex import run_config
from quantum_convex import subgrad


# CONSTANTS ---
LIPSCHITZ_HEADROOM = 2.0  # Default L as a multiple of the objective's bound.
MISMATCH_TOLERANCE = 1e-12
INSTANCE_COMMANDS = ("gradest", "subgrad", "optimize")


class RunResult(object):
    """Rows and summary of one subcommand run.

    Attributes:
        columns (tuple): CSV column names.
        rows (list): Rows, already sorted.
        summary (dict): Values written as "# summary key=value" lines.
        tables (list): Extra (name, columns, rows) tables written as comments.
        status (str): Key of lookup_table.EXIT_CODES.
    """

    def __init__(self, columns, rows, summary=None, tables=None, status="success"):
        self.columns = columns
        self.rows = rows
        self.summary = summary or {}
        self.tables = tables or []
        self.status = status


# HELPERS ---
def _generators(seed, count):
    """Generators for the setup (index 0) and for count trials.

    Note:
        Child i of a SeedSequence doesn't depend on how many children are
        spawned, so the setup generator is the same for every count.
    """
    children = np.random.SeedSequence(seed).spawn(count + 1)
    return [np.random.default_rng(child) for child in children]


def _run_tasks(func, tasks, workers):
    """Run func(*task) for every task, in a thread pool if workers > 1."""
    if workers == 1:
        return [func(*task) for task in tasks]

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda task: func(*task), tasks))


def _instance(run, rng):
    params = dict(run.instance)
    name = params.pop("family", None)
    if name is None:
        msg = "No instance family configured for {0}!".format(run.command)
        raise errors.ParamError(msg)
    return families.build_instance(name, rng, **params)


def _lipschitz(run, objective):
    if run.lipschitz is not None:
        return float(run.lipschitz)
    return LIPSCHITZ_HEADROOM * objective.lipschitz


def _point(run, instance):
    if run.point is None:
        return instance.body.center
    return oracles.as_point(run.point, instance.dimension)


def _hidden_strings(run, width, rng):
    """Hidden strings of the given width: configured, exhaustive or random."""
    if run.hidden:
        return [
            families.hidden_bits(value, width, rng)
            for value in run.hidden if len(value) == width
        ]
    if run.exhaustive:
        return [np.array(bits) for bits in itertools.product((0, 1), repeat=width)]
    return [rng.integers(0, 2, size=width) for _ in range(run.trials)]


def _cell(value):
    """Deterministic CSV text of a value."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "{0:.12g}".format(float(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(_cell(item) for item in value)
    return str(value)


def write_csv(stream, run, result):
    """Write header comments, rows, extra tables and summary of a run.

    Args:
        stream (file): Text stream to write to.
        run (RunConfig): Config echoed into the header.
        result (RunResult): What to write.
    """
    stream.write("# quantum_convex {0}\n".format(config.ARTIFACT_VERSION))
    stream.write("# config {0}\n".format(run.echo()))

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(value) for value in row])

    for name, columns, rows in result.tables:
        stream.write("# {0}: {1}\n".format(name, ",".join(columns)))
        for row in rows:
            stream.write("# {0}: {1}\n".format(name, ",".join(_cell(value) for value in row)))

    for key in sorted(result.summary):
        stream.write("# summary {0}={1}\n".format(key, _cell(result.summary[key])))


def _write(run, result):
    if run.out in (None, "-"):
        write_csv(sys.stdout, run, result)
        return

    with open(run.out, "w", newline="") as csv_file:
        write_csv(csv_file, run, result)
    LOG.info("Wrote %s rows to %s", len(result.rows), run.out)


# COMMANDS ---
def cmd_gradest(run):
    """Repeated gradient estimates against the analytic gradient.

    Note:
        One row per trial and coordinate. A coordinate fails if its error
        exceeds 1500 sqrt(n eps beta). The summary compares the failure rate
        with 1/3 and the mean L1 error with 3000 n^1.5 sqrt(eps beta).
        Without an explicit epsilon it is chosen to give "bits" qubits per
        register.

    Args:
        run (RunConfig): Settings of the run.

    Raises:
        ParamError: If the objective has no analytic gradient.
        ParamsInfeasible: If the settings admit no register width.

    Returns:
        RunResult: Rows and summary.
    """
    setup_rng, *trial_rngs = _generators(run.seed, run.trials)
    instance = _instance(run, setup_rng)
    objective = instance.objective
    if objective.gradient is None:
        msg = "Objective {0} has no analytic gradient to compare with!".format(
            objective.name
        )
        raise errors.ParamError(msg)

    n = objective.dimension
    lipschitz = _lipschitz(run, objective)
    beta = run.beta if run.beta is not None else (objective.smoothness or 1.0)
    if run.epsilon is None:
        params = qgrad.GradParams.for_register_width(n, lipschitz, beta, run.bits)
    else:
        params = qgrad.derive_grad_params(n, lipschitz, beta, run.epsilon)
    epsilon = params.epsilon

    point = _point(run, instance)
    gradient = oracles.as_point(objective.gradient(point), n)
    threshold = qgrad.FAILURE_RADIUS * params.scale

    def trial(index, rng):
        oracle = oracles.CountedOracle(objective, precision=epsilon)
        if run.smooth:
            estimate = qgrad.smooth_quantum_gradient(oracle, epsilon, lipschitz, beta, point, rng)
        else:
            estimate = qgrad.gradient_estimate(
                oracle, epsilon, lipschitz, beta, point, rng, params=params
            )
        error = np.abs(estimate - gradient)
        rows = [
            [index, coordinate, estimate[coordinate], gradient[coordinate],
             error[coordinate], error[coordinate] > threshold]
            for coordinate in range(n)
        ]
        return rows, oracle.phase_query_count

    results = _run_tasks(trial, list(enumerate(trial_rngs)), run.workers)
    rows = sorted(row for trial_rows, _ in results for row in trial_rows)
    l1_errors = [sum(row[4] for row in trial_rows) for trial_rows, _ in results]

    summary = {
        "failure_rate": sum(row[5] for row in rows) / float(len(rows)),
        "failure_threshold": threshold,
        "mean_l1_error": float(np.mean(l1_errors)),
        "l1_ceiling": qgrad.EXPECTED_L1_ERROR * n ** 1.5 * math.sqrt(epsilon * beta),
        "mean_phase_queries": float(np.mean([queries for _, queries in results])),
        "epsilon": epsilon,
        "N": params.N,
        "N0": params.N0,
    }
    return RunResult(lookup_table.CSV_COLUMNS["gradest"], rows, summary)


def cmd_subgrad(run):
    """Quantum subgradients with certificate check and finite-difference baseline.

    Note:
        zeta is the smallest slack that makes the approximate subgradient
        inequality hold on a grid of about q_points probes in
        B_inf(x, q_radius). The baseline uses n + 1 evaluations with step
        sqrt(eps). The query-separation table is appended as comments.

    Args:
        run (RunConfig): Settings of the run.

    Returns:
        RunResult: Rows, summary and the separation table.
    """
    setup_rng, *trial_rngs = _generators(run.seed, run.trials)
    instance = _instance(run, setup_rng)
    objective = instance.objective
    n = objective.dimension
    lipschitz = _lipschitz(run, objective)
    point = _point(run, instance)
    ceiling = subgrad.expected_error_ceiling(n, lipschitz, run.r1, run.epsilon)

    resolution = max(2, int(round(run.q_points ** (1.0 / n))))
    q_samples = oracles.grid_points(point - run.q_radius, point + run.q_radius, resolution)

    def trial(index, rng):
        oracle = oracles.CountedOracle(objective, precision=run.epsilon)
        result = subgrad.quantum_subgradient(oracle, run.epsilon, lipschitz, point, run.r1, rng)
        zeta = subgrad.subgradient_certificate_check(
            objective, point, result.gradient, run.r1, lipschitz, q_samples
        )

        baseline_oracle = oracles.CountedOracle(objective)
        baseline = subgrad.finite_difference_gradient(
            baseline_oracle, point, math.sqrt(run.epsilon)
        )
        baseline_zeta = subgrad.subgradient_certificate_check(
            objective, point, baseline, run.r1, lipschitz, q_samples
        )
        return [
            index, zeta, ceiling, result.logical_queries, result.raw_queries,
            baseline_zeta, baseline_oracle.query_count,
        ]

    rows = sorted(_run_tasks(trial, list(enumerate(trial_rngs)), run.workers))
    measured = {n: float(np.mean([row[3] for row in rows]))}
    table = subgrad.query_separation_table(
        run.table_dimensions, run.epsilon, lipschitz, run.r1, measured=measured
    )

    summary = {
        "mean_zeta": float(np.mean([row[1] for row in rows])),
        "max_zeta": float(np.max([row[1] for row in rows])),
        "zeta_ceiling": ceiling,
        "mean_baseline_zeta": float(np.mean([row[5] for row in rows])),
    }
    tables = [("separation_table", lookup_table.CSV_COLUMNS["separation_table"], table)]
    return RunResult(lookup_table.CSV_COLUMNS["subgrad"], rows, summary, tables)


def cmd_optimize(run):
    """Minimize the configured instance, one row per trial.

    Note:
        A trial that hits the iteration cap contributes its best-so-far row
        and makes the run exit with the no-convergence code.

        With quantum separation, linear objectives are minimized over the
        body itself (reductions.minimize_linear). Their epigraphs are too
        badly conditioned for a simulated quantum subgradient.

    Args:
        run (RunConfig): Settings of the run.

    Returns:
        RunResult: Rows and summary.
    """
    setup_rng, *trial_rngs = _generators(run.seed, run.trials)
    instance = _instance(run, setup_rng)
    direction = reductions.linear_direction(instance.objective)
    direct = run.separation == reductions.QUANTUM and direction is not None

    def minimize(body_oracle, objective_oracle, rng):
        settings = dict(
            separation=run.separation,
            delta=run.delta,
            rho=run.rho,
            max_iterations=run.max_iterations,
        )
        if direct:
            return reductions.minimize_linear(body_oracle, direction, run.epsilon, rng, **settings)
        return reductions.minimize_convex(body_oracle, objective_oracle, run.epsilon, rng, **settings)

    def trial(index, rng):
        body_oracle = oracles.CountedOracle(instance.body)
        objective_oracle = oracles.CountedOracle(instance.objective)
        converged_run = True
        try:
            report = minimize(body_oracle, objective_oracle, rng)
        except errors.NoConvergence as err:
            LOG.warning("Trial %s: %s", index, err)
            report = err.report or reductions.OptimizeReport()
            converged_run = False

        error = None
        if instance.optimum is not None and math.isfinite(report.value):
            error = report.value - instance.optimum
        row = [
            index, report.value, instance.optimum, error, report.lower_bound,
            report.iterations, report.separation_queries, report.membership_queries,
            report.evaluation_queries, report.converged, report.point,
        ]
        return row, converged_run

    results = _run_tasks(trial, list(enumerate(trial_rngs)), run.workers)
    rows = sorted((row for row, _ in results), key=lambda row: row[0])
    failures = sum(1 for _, converged_run in results if not converged_run)

    errors_ = [abs(row[3]) for row in rows if row[3] is not None]
    summary = {
        "instance": instance.name,
        "optimum": instance.optimum,
        "max_error": max(errors_) if errors_ else None,
        "non_converged": failures,
    }
    status = "no_convergence" if failures else "success"
    return RunResult(lookup_table.CSV_COLUMNS["optimize"], rows, summary, status=status)


# LOWER BOUNDS ---
def _reduce_wildcard(bits, run, rng):
    """n singleton wildcard queries."""
    instance = lowerbound.WildcardInstance(bits)
    recovered = lowerbound.classical_wildcard_driver(instance)
    return recovered, 0, 0, instance.query_count


def _reduce_sum_coords(bits, run, rng):
    """Minimize sum(x) over C_s and round the minimizer back to s."""
    instance = lowerbound.WildcardInstance(bits, "sum_coords")
    body = lowerbound.sum_coords_body(instance)
    body_oracle = oracles.CountedOracle(body)
    objective_oracle = oracles.CountedOracle(lowerbound.sum_coords_objective(body))
    report = reductions.minimize_convex(body_oracle, objective_oracle, run.epsilon, rng)
    recovered = lowerbound.round_sgn(report.point, lowerbound.SUM_COORDS_THRESHOLD)
    return (
        recovered, body_oracle.query_count, objective_oracle.query_count,
        instance.query_count,
    )


def _reduce_max_norm(bits, run, rng):
    """Answer n wildcard queries on c with n evaluations of f_c."""
    oracle = oracles.CountedOracle(lowerbound.MaxNormInstance(bits).objective())
    recovered, queries = lowerbound.solve_max_norm_via_wildcards(oracle)
    return recovered, 0, oracle.query_count, queries


def _reduce_combined(bits, run, rng):
    """Minimize the combined instance and round to (s, c)."""
    n = bits.size // 2
    body_oracle, objective_oracle = lowerbound.combined_instance(bits[:n], bits[n:])
    report = reductions.minimize_convex(body_oracle, objective_oracle, run.epsilon, rng)
    s, c = lowerbound.recover_combined(report.point, n)
    return (
        np.concatenate([s, c]), body_oracle.query_count, objective_oracle.query_count,
        body_oracle.underlying.wildcard.query_count,
    )


LOWER_BOUND_REDUCTIONS = {
    "wildcard": _reduce_wildcard,
    "sum_coords": _reduce_sum_coords,
    "max_norm": _reduce_max_norm,
    "combined": _reduce_combined,
}


def cmd_lowerbound(run):
    """Recover hidden strings through the lower-bound reductions.

    Note:
        One row per reduction and hidden string, with the query accounting
        of every oracle involved. Combined instances hide 2n bits (s then c).

    Args:
        run (RunConfig): Settings of the run.

    Raises:
        ParamError: If a reduction name is unknown.

    Returns:
        RunResult: Rows and summary.
    """
    setup_rng = _generators(run.seed, 0)[0]
    tasks = []
    for reduction in run.reductions:
        if reduction not in LOWER_BOUND_REDUCTIONS:
            msg = "Unknown reduction '{0}', available: {1}!".format(
                reduction, ", ".join(sorted(LOWER_BOUND_REDUCTIONS))
            )
            raise errors.ParamError(msg)
        width = 2 * run.n if reduction == "combined" else run.n
        for bits in _hidden_strings(run, width, setup_rng):
            tasks.append((reduction, bits))

    trial_rngs = _generators(run.seed, len(tasks))[1:]

    def task(reduction, bits, rng):
        hidden = families.bit_string(bits)
        try:
            recovered, memberships, evaluations, wildcards = LOWER_BOUND_REDUCTIONS[reduction](
                bits, run, rng
            )
        except errors.NoConvergence as err:
            LOG.warning("%s on %s: %s", reduction, hidden, err)
            return [reduction, hidden, None, False, None, None, None], False

        recovered = families.bit_string(recovered)
        row = [reduction, hidden, recovered, recovered == hidden, memberships, evaluations, wildcards]
        return row, True

    results = _run_tasks(
        task, [(reduction, bits, rng) for (reduction, bits), rng in zip(tasks, trial_rngs)],
        run.workers,
    )
    rows = sorted((row for row, _ in results), key=lambda row: (row[0], row[1]))

    summary = {}
    for reduction in sorted(set(run.reductions)):
        matches = [row[3] for row in rows if row[0] == reduction]
        summary["{0}_recovered".format(reduction)] = "{0}/{1}".format(sum(matches), len(matches))
    failures = sum(1 for _, finished in results if not finished)
    status = "no_convergence" if failures else "success"
    return RunResult(lookup_table.CSV_COLUMNS["lowerbound"], rows, summary, status=status)


def cmd_discretize(run):
    """Compare the discretized evaluation with f_c on random points.

    Note:
        For every hidden c, "trials" points of [0, 1]^n are evaluated
        through a noisy oracle (error at most "noise", by default
        1/(5n + 2)). Any mismatch beyond 1e-12 makes the run exit with the
        contract-violation code.

    Args:
        run (RunConfig): Settings of the run.

    Returns:
        RunResult: One row per hidden string.
    """
    n = run.n
    noise = run.noise if run.noise is not None else 1.0 / (5 * n + 2)
    kind = lookup_table.NOISE_KINDS.get(run.noise_kind)
    if kind is None:
        msg = "Unknown noise kind '{0}', available: {1}!".format(
            run.noise_kind, ", ".join(sorted(lookup_table.NOISE_KINDS))
        )
        raise errors.ParamError(msg)
    if kind == oracles.NoisePolicy.ROUND_TO_GRID:
        policy = oracles.NoisePolicy.round_to_grid(2.0 * noise)
    else:
        policy = oracles.NoisePolicy(kind, noise if kind == oracles.NoisePolicy.ADDITIVE else 0.0)

    setup_rng = _generators(run.seed, 0)[0]
    run_exhaustive = run.hidden is None
    hidden = (
        [np.array(bits) for bits in itertools.product((0, 1), repeat=n)]
        if run_exhaustive else
        [families.hidden_bits(value, n, setup_rng) for value in run.hidden]
    )
    trial_rngs = _generators(run.seed, len(hidden))[1:]

    def task(bits, rng):
        oracle = oracles.CountedOracle(
            lowerbound.MaxNormInstance(bits).objective(), precision=noise, noise_policy=policy
        )
        gaps = [
            abs(lowerbound.discretized_eval(x, oracle) - lowerbound.max_norm_eval(bits, x))
            for x in rng.random((run.trials, n))
        ]
        mismatches = sum(1 for gap in gaps if gap > MISMATCH_TOLERANCE)
        return [families.bit_string(bits), run.trials, mismatches, max(gaps), oracle.query_count]

    rows = sorted(_run_tasks(task, list(zip(hidden, trial_rngs)), run.workers))
    total = sum(row[2] for row in rows)
    summary = {"mismatches": total, "noise": noise, "noise_kind": run.noise_kind}
    status = "contract_violation" if total else "success"
    return RunResult(lookup_table.CSV_COLUMNS["discretize"], rows, summary, status=status)


COMMANDS = {
    "gradest": cmd_gradest,
    "subgrad": cmd_subgrad,
    "optimize": cmd_optimize,
    "lowerbound": cmd_lowerbound,
    "discretize": cmd_discretize,
}


# PARSER ---
def build_parser():
    """Argument parser with one subparser per command.

    Note:
        Unset flags are left out of the namespace entirely, so they never
        override values of a config file.

    Returns:
        argparse.ArgumentParser: The parser.
    """
    parser = argparse.ArgumentParser(
        prog="quantum-convex",
        description="Seeded experiments on simulated quantum convex optimization.",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s {0}".format(__version__)
    )

    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with run settings.")
    common.add_argument("--seed", type=int, help="Seed of every random choice.")
    common.add_argument("--trials", type=int, help="Number of seeded trials.")
    common.add_argument("--out", help="Output CSV path; stdout if omitted or '-'.")
    common.add_argument("--workers", type=int, help="Threads running trials.")
    common.add_argument("--verbose", action="store_true", help="Log debug messages.")
    common.add_argument("--log-file", help="Also log to this rotating file.")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    def add_command(name, help_text):
        return subparsers.add_parser(
            name, parents=[common], help=help_text, argument_default=argparse.SUPPRESS
        )

    def add_instance_flags(sub):
        sub.add_argument("--family", choices=families.names(), help="Instance family.")
        sub.add_argument("--n", type=int, help="Dimension of the instance.")

    gradest = add_command("gradest", "Quantum gradient estimation trials.")
    add_instance_flags(gradest)
    gradest.add_argument("--epsilon", type=float, help="Evaluation error.")
    gradest.add_argument("--bits", type=int, help="Qubits per register if no epsilon.")
    gradest.add_argument("--beta", type=float, help="Smoothness bound.")
    gradest.add_argument("--lipschitz", type=float, help="Lipschitz bound L.")
    gradest.add_argument("--point", type=float, nargs="+", help="Point of the gradient.")
    gradest.add_argument("--smooth", action="store_true", help="Repeat and take medians.")

    subgradient = add_command("subgrad", "Quantum subgradients of nonsmooth functions.")
    add_instance_flags(subgradient)
    subgradient.add_argument("--epsilon", type=float, help="Evaluation error.")
    subgradient.add_argument("--lipschitz", type=float, help="Lipschitz bound L.")
    subgradient.add_argument("--r1", type=float, help="Approximation scale.")
    subgradient.add_argument("--point", type=float, nargs="+", help="Point of the subgradient.")
    subgradient.add_argument("--q-points", type=int, help="Probes of the certificate check.")
    subgradient.add_argument("--q-radius", type=float, help="Radius of the probe grid.")

    optimize = add_command("optimize", "Minimize an instance via its epigraph.")
    add_instance_flags(optimize)
    optimize.add_argument("--epsilon", type=float, help="Wanted accuracy.")
    optimize.add_argument(
        "--separation", choices=(reductions.CLASSICAL, reductions.QUANTUM),
        help="Separation procedure.",
    )
    optimize.add_argument("--delta", type=float, help="Membership precision (quantum).")
    optimize.add_argument("--rho", type=float, help="Failure probability (quantum).")
    optimize.add_argument("--max-iterations", type=int, help="Ellipsoid iteration cap.")

    lower = add_command("lowerbound", "Recover hidden strings via the reductions.")
    lower.add_argument("--n", type=int, help="Length of the hidden strings.")
    lower.add_argument(
        "--reductions", nargs="+", choices=sorted(LOWER_BOUND_REDUCTIONS),
        help="Reductions to run.",
    )
    lower.add_argument("--hidden", nargs="+", help="Hidden strings, e.g. 0110.")
    lower.add_argument(
        "--random", dest="exhaustive", action="store_false",
        help="Draw 'trials' random strings instead of all of them.",
    )
    lower.add_argument("--epsilon", type=float, help="Accuracy of the optimizations.")

    discretize = add_command("discretize", "Check the discretized max-norm evaluation.")
    discretize.add_argument("--n", type=int, help="Dimension.")
    discretize.add_argument("--hidden", nargs="+", help="Hidden strings; all if omitted.")
    discretize.add_argument("--noise", type=float, help="Oracle error bound.")
    discretize.add_argument(
        "--noise-kind", choices=sorted(lookup_table.NOISE_KINDS), help="Oracle error model."
    )

    return parser


def _cli_values(command, namespace):
    """Settings given on the command line, with instance flags nested."""
    values = vars(namespace).copy()
    values.pop("command", None)
    for key in ("config", "verbose", "log_file"):
        values.pop(key, None)

    if command in INSTANCE_COMMANDS:
        instance = {}
        if "family" in values:
            instance["family"] = values.pop("family")
        if "n" in values:
            instance["n"] = values.pop("n")
        if instance:
            values["instance"] = instance
    return values


def main(argv=None):
    """Run the command line.

    Args:
        argv (list): Arguments without the program name; sys.argv if None.

    Returns:
        int: Exit code.
    """
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as err:
        if isinstance(err.code, int):
            return err.code
        return lookup_table.EXIT_CODES["usage"]

    if getattr(namespace, "verbose", False):
        logger.set_stream_level(logger.logging.DEBUG)
    log_file = getattr(namespace, "log_file", None)
    if log_file:
        logger.setup_file_handler(log_file, level=logger.logging.DEBUG)

    command = namespace.command
    try:
        config_path = getattr(namespace, "config", None)
        file_values = run_config.load_run_config(config_path) if config_path else {}
        run = run_config.build_run_config(command, file_values, _cli_values(command, namespace))
        LOG.info("Running %s", run)
        result = COMMANDS[command](run)
        _write(run, result)
    except errors.NoConvergence as err:
        LOG.error("%s", err)
        return lookup_table.EXIT_CODES["no_convergence"]
    except errors.ContractViolation as err:
        LOG.error("%s", err)
        return lookup_table.EXIT_CODES["contract_violation"]
    except (errors.QuantumConvexError, ValueError, OSError) as err:
        LOG.error("%s", err)
        return lookup_table.EXIT_CODES["usage"]

    return lookup_table.EXIT_CODES[result.status]
