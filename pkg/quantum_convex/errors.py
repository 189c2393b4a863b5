"""Exceptions raised by QuantumConvex.

Note:
    All exceptions derive from QuantumConvexError, so callers (and the CLI)
    can catch the whole family at once. Errors that signal a bad argument
    also derive from ValueError.
"""


class QuantumConvexError(RuntimeError):
    """Base class of all QuantumConvex errors."""


class InvalidPoint(QuantumConvexError, ValueError):
    """A queried point has non-finite coordinates or the wrong dimension."""


class DomainError(QuantumConvexError, ValueError):
    """A point or parameter lies outside the declared domain."""


class ParamError(QuantumConvexError, ValueError):
    """An algorithm precondition on its parameters is violated."""


class ArityError(QuantumConvexError, ValueError):
    """Index set and bit string of a wildcard query differ in length."""


class ParamsInfeasible(QuantumConvexError):
    """No admissible register width exists for the requested accuracy."""


class StateTooLarge(QuantumConvexError):
    """A simulated state would exceed the statevector budget."""


class DegenerateGrid(QuantumConvexError):
    """The grid spacing is larger than the box it should be embedded in."""


class BracketError(QuantumConvexError):
    """A height-function ray never enters the body within its bracket."""


class ContractViolation(QuantumConvexError):
    """An oracle answered outside of its declared contract."""


class NoConvergence(QuantumConvexError):
    """An iterative driver hit its iteration cap.

    Args:
        msg (str): Error message.
        report (OptimizeReport): Best-so-far result of the driver.
    """

    def __init__(self, msg, report=None):
        super(NoConvergence, self).__init__(msg)
        self.report = report
