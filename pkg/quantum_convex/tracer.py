"""Trace the oracle queries issued by QuantumConvex algorithms.

Note:
    Every counted oracle reports its queries here. Outside of a Tracer
    context nothing is recorded; the counters on the oracles themselves are
    always active.

Example:
    ::

        import quantum_convex as qc

        with qc.Tracer(pprint_trace=True) as trace:
            qc.oracles.query_membership(oracle, [0.5, 0.0])

        # Printout:
        # membership(ball) -> In
"""

# IMPORTS ---
# Python imports
import threading

# Local imports
from quantum_convex import LOG


# GLOBALS ---
_LOCK = threading.Lock()
_IS_TRACING = False
_EXECUTED_QUERIES_STACK = []


def is_tracing():
    """Check whether a Tracer context is currently recording.

    Returns:
        bool: True while inside a Tracer with trace=True.
    """
    return _IS_TRACING


def record(kind, label, answer):
    """Append a query record to the trace stack, if tracing.

    Args:
        kind (str): Oracle kind, e.g. "membership" or "evaluation".
        label (str): Name of the queried body or function.
        answer (any): The oracle answer; formatted with str().
    """
    if not _IS_TRACING:
        return

    entry = "{0}({1}) -> {2}".format(kind, label, answer)
    with _LOCK:
        _EXECUTED_QUERIES_STACK.append(entry)


def reset():
    """Stop tracing and drop all recorded queries."""
    global _IS_TRACING
    global _EXECUTED_QUERIES_STACK
    with _LOCK:
        _IS_TRACING = False
        _EXECUTED_QUERIES_STACK = []


class Tracer(object):
    """Class that returns all oracle queries issued inside a with-statement.

    Note:
        Any QuantumConvex call enclosed in a with-statement will be logged.
        Tracers do not nest; the inner one restarts the stack.

    Example:
        ::

            with Tracer(pprint_trace=True) as s:
                minimize_convex(body, objective, 1e-2, rng)
            print(len(s))
    """

    def __init__(self, trace=True, print_trace=False, pprint_trace=False):
        """Tracer-class constructor.

        Args:
            trace (bool): Enables/disables tracing.
            print_trace (bool): Print query stack as a list.
            pprint_trace (bool): Print query stack as a multi-line string.
        """
        self.trace = trace
        self.print_trace = print_trace
        self.pprint_trace = pprint_trace

    def __enter__(self):
        """Set up the module state for tracing.

        Returns:
            list: List of all executed queries (filled while tracing).
        """
        global _IS_TRACING
        global _EXECUTED_QUERIES_STACK

        with _LOCK:
            _EXECUTED_QUERIES_STACK = []
            _IS_TRACING = bool(self.trace)

        return _EXECUTED_QUERIES_STACK

    def __exit__(self, exc_type, value, traceback):
        """Print executed queries at the end of the with-statement."""
        global _IS_TRACING

        output_desired = self.print_trace or self.pprint_trace
        if not self.trace and output_desired:
            LOG.warning("QuantumConvex queries were not traced!")

        if self.print_trace:
            print("QuantumConvex query-stack:", _EXECUTED_QUERIES_STACK)

        elif self.pprint_trace:
            print("~~~~~~~~~~~~~~ QuantumConvex query-stack: ~~~~~~~~~~~~~~")
            for item in _EXECUTED_QUERIES_STACK:
                print(item)
            print("~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~")

        _IS_TRACING = False
