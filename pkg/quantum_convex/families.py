"""Named instance families for experiments.

Note:
    A family is a function (rng, **params) -> Instance that is registered on
    the Family class by the @family decorator. The experiment harness builds
    instances by name, so new families become available to config files and
    the command line without touching the harness.

    Hidden strings can be given explicitly (list of bits or a string like
    "101") or are drawn from the rng.

Example:
    ::

        import numpy as np
        import quantum_convex as qc
        from quantum_convex import families

        @families.family
        def shifted_ball(rng, n=2, shift=1.0):
            body = qc.oracles.ball(n, center=np.full(n, shift))
            objective = qc.oracles.linear_objective(np.ones(n), body)
            return families.Instance("shifted_ball", body, objective)

        families.Family.available()
        instance = families.build_instance(
            "sum_coords", np.random.default_rng(0), n=3, s="101"
        )
"""


# IMPORTS ---
# Python imports
import inspect

# Third party imports
import numpy as np

# Local imports
from quantum_convex import LOG
from quantum_convex import errors
from quantum_convex import lowerbound
from quantum_convex import oracles


class Instance(object):
    """A convex body with an objective and, if known, its optimal value.

    Attributes:
        name (str): Name of the family that built the instance.
        body (ConvexBody): Feasible set.
        objective (ObjectiveFunction): Function to minimize.
        optimum (float): Exact optimal value, None if unknown.
        hidden (dict): Hidden bit strings by name, e.g. {"s": array([1, 0])}.
    """

    def __init__(self, name, body, objective, optimum=None, hidden=None):
        self.name = name
        self.body = body
        self.objective = objective
        self.optimum = optimum
        self.hidden = hidden or {}

    def __repr__(self):
        return "Instance({0}, n={1}, optimum={2})".format(
            self.name, self.body.dimension, self.optimum
        )

    @property
    def dimension(self):
        return self.body.dimension


class FamilyMetaClass(type):
    """MetaClass for the registry of instance families."""

    def available(cls, full=False):
        """Print all registered families.

        Args:
            full (bool): If False only the family-names are printed. If True
                the docString of all families is printed. Defaults to False.
        """
        print("\n############ Available QuantumConvex Families ############")

        for name in names():
            if full:
                title_text = "{0}:".format(name)
                title_str = "{0}\n{1}\n{2}".format(
                    "="*60, title_text, "-"*len(title_text)
                )
                print(title_str)
                print(getattr(cls, name).__doc__)
            else:
                print(name)

        print("############################################################")


class Family(object, metaclass=FamilyMetaClass):
    """Registry of instance families, filled by the @family decorator."""


def family(func):
    """Register given function as an instance family on the Family-class.

    Args:
        func (executable): Function (rng, **params) -> Instance.

    Returns:
        executable: func itself, so the decorator can be stacked.
    """
    setattr(Family, func.__name__, staticmethod(func))
    return func


def names():
    """Sorted names of all registered families."""
    return sorted(
        item for item in vars(Family)
        if not item.startswith("_") and callable(getattr(Family, item))
    )


def build_instance(name, rng, **params):
    """Build an instance of the named family.

    Args:
        name (str): Registered family name.
        rng (numpy.random.Generator): Source of hidden strings and random
            parameters.
        params (dict): Keyword parameters of the family.

    Raises:
        ParamError: If the family is unknown or doesn't take a parameter.

    Returns:
        Instance: The built instance.
    """
    if name not in names():
        msg = "Unknown instance family '{0}', available: {1}!".format(
            name, ", ".join(names())
        )
        raise errors.ParamError(msg)

    builder = getattr(Family, name)
    try:
        inspect.signature(builder).bind(rng, **params)
    except TypeError as err:
        msg = "Bad parameters {0} for family '{1}': {2}".format(params, name, err)
        raise errors.ParamError(msg)

    instance = builder(rng, **params)
    LOG.info("Built %s", instance)
    return instance


def hidden_bits(value, n, rng):
    """Bits from a list, a "0101" string or, for None, from the rng.

    Raises:
        ParamError: If the length is not n or a value is not a bit.

    Returns:
        numpy.ndarray: Integer array of n bits.
    """
    if value is None:
        return rng.integers(0, 2, size=n)

    if isinstance(value, str):
        if not set(value) <= {"0", "1"}:
            msg = "Hidden string '{0}' may only hold 0 and 1!".format(value)
            raise errors.ParamError(msg)
        value = [int(char) for char in value]

    bits = np.asarray(value, dtype=np.int64).reshape(-1)
    if bits.size != n or not np.all((bits == 0) | (bits == 1)):
        msg = "Expected {0} hidden bits, got {1}!".format(n, value)
        raise errors.ParamError(msg)
    return bits


def bit_string(bits):
    """Render bits as a compact string, e.g. array([1, 0]) -> "10"."""
    return "".join(str(int(bit)) for bit in bits)


def _smoothed_sum_minimum(x0, l):
    """min sum(x) over SC_{x0, l}: lower inner corner minus the rounding."""
    n = x0.size
    inner_lower = x0 - (2.0 * n / (2 * n + 1)) * l
    return float(np.sum(inner_lower) - l / (2 * n + 1) * np.sqrt(n))


# FAMILIES ---
@family
def ball(rng, n=2, radius=1.0, c=None):
    """Linear objective <c, x> over the ball B2(0, radius).

    Args:
        rng (numpy.random.Generator): Unused; families share a signature.
        n (int): Dimension.
        radius (float): Ball radius.
        c (iterable): Objective vector, defaults to e_1.

    Returns:
        Instance: Optimum -||c|| radius.
    """
    body = oracles.ball(n, radius)
    if c is None:
        c = np.zeros(n)
        c[0] = 1.0
    c = oracles.as_point(c, n)
    objective = oracles.linear_objective(c, body)
    return Instance("ball", body, objective, optimum=-float(np.linalg.norm(c)) * radius)


@family
def box(rng, n=2, lower=None, upper=None):
    """sum(x) over an axis-aligned box; defaults to [-1, 1]^n."""
    lower = -np.ones(n) if lower is None else oracles.as_point(lower, n)
    upper = np.ones(n) if upper is None else oracles.as_point(upper, n)
    body = oracles.box(lower, upper)
    objective = oracles.linear_objective(np.ones(n), body)
    objective.name = "sum_coords"
    return Instance("box", body, objective, optimum=float(np.sum(lower)))


@family
def smoothed_hypercube(rng, n=2, x0=None, l=1.0):
    """sum(x) over the smoothed hypercube SC_{x0, l}; x0 defaults to ones."""
    x0 = np.ones(n) if x0 is None else oracles.as_point(x0, n)
    body = oracles.smoothed_hypercube(x0, l)
    objective = oracles.linear_objective(np.ones(n), body)
    objective.name = "sum_coords"
    return Instance(
        "smoothed_hypercube", body, objective, optimum=_smoothed_sum_minimum(x0, l)
    )


@family
def quadratic(rng, n=1, beta=1.0, radius=1.0):
    """Random beta-smooth quadratic over the ball B2(0, radius).

    Note:
        The Hessian has eigenvalues in [beta/2, beta] with beta attained;
        the minimizer is drawn from B2(0, radius/2), so the optimum is 0.
        The Lipschitz constant 1.5 beta radius sqrt(n) holds on the ball in
        the infinity-norm sense.
    """
    eigenvalues = rng.uniform(beta / 2.0, beta, size=n)
    eigenvalues[0] = beta
    rotation, _ = np.linalg.qr(rng.standard_normal(size=(n, n)))
    hessian = rotation @ np.diag(eigenvalues) @ rotation.T
    minimizer = oracles.sample_ball(rng, np.zeros(n), radius / 2.0, 1)[0]

    body = oracles.ball(n, radius)
    objective = oracles.quadratic_objective(
        hessian,
        lipschitz=1.5 * beta * radius * np.sqrt(n),
        minimizer=minimizer,
        radius=1.5 * radius,
    )
    return Instance("quadratic", body, objective, optimum=0.0)


@family
def abs_sum(rng, n=1, radius=1.0):
    """sum |x_i| over the cube [-radius, radius]^n, nonsmooth at its optimum 0."""
    body = oracles.box(-radius * np.ones(n), radius * np.ones(n), name="cube")
    objective = oracles.abs_sum_objective(n, radius)
    return Instance("abs_sum", body, objective, optimum=0.0)


@family
def sum_coords(rng, n=2, s=None, smoothed=False):
    """sum(x) over C_s = prod [s_i - 2, s_i + 1] or its smoothed version.

    Note:
        The plain body answers membership through a wildcard instance over
        s (kept as body.wildcard). Its optimum is sum(s_i - 2). The smoothed
        body SC_{s+1, 3} has exact geometry.
    """
    s = hidden_bits(s, n, rng)
    if smoothed:
        body = lowerbound.smoothed_sum_coords_body(s)
        optimum = _smoothed_sum_minimum(s + 1.0, 3.0)
    else:
        body = lowerbound.sum_coords_body(lowerbound.WildcardInstance(s, "sum_coords"))
        optimum = float(np.sum(s - 2))
    objective = lowerbound.sum_coords_objective(body)
    return Instance("sum_coords", body, objective, optimum=optimum, hidden={"s": s})


@family
def max_norm(rng, n=2, c=None, smoothed=False):
    """Max-norm function f_c over [0, 1]^n or the smoothed hypercube SC_{1, 1}.

    Note:
        Over the cube the optimum is 0, attained at c. SC_{1, 1} misses the
        corners; its closest point to c in the max-norm lies on the
        diagonal, giving the optimum (1 - 1/sqrt(n)) / (2n + 1).
    """
    c = hidden_bits(c, n, rng)
    if smoothed:
        body = oracles.smoothed_hypercube(np.ones(n), 1.0)
        optimum = (1.0 - 1.0 / np.sqrt(n)) / (2 * n + 1)
    else:
        body = oracles.box(np.zeros(n), np.ones(n), name="unit_cube")
        optimum = 0.0
    objective = lowerbound.MaxNormInstance(c).objective()
    return Instance("max_norm", body, objective, optimum=float(optimum), hidden={"c": c})


@family
def combined(rng, n=2, s=None, c=None):
    """2n-dimensional instance hiding s in the body and c in the objective."""
    s = hidden_bits(s, n, rng)
    c = hidden_bits(c, n, rng)
    body_oracle, objective_oracle = lowerbound.combined_instance(s, c)
    return Instance(
        "combined",
        body_oracle.underlying,
        objective_oracle.underlying,
        optimum=float(np.sum(s - 2)),
        hidden={"s": s, "c": c},
    )
