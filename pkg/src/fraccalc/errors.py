"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage problems exit with 2,
malformed input data with 3, violated mathematical preconditions with 4.
Anything else is an ordinary crash.
"""

from __future__ import annotations


class FracCalcError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class UsageError(FracCalcError):
    """Unknown names, malformed option syntax, invalid parameter values."""

    exit_code = 2


class UnknownNameError(UsageError):
    """A catalog entry or check id that does not exist."""


class InvalidParameterError(UsageError):
    """A parameter outside its documented domain (e.g. a negative order)."""


class DataError(FracCalcError):
    """Input data that cannot be interpreted (bad CSV, non-uniform grid)."""

    exit_code = 3


class PreconditionError(FracCalcError):
    """A mathematical precondition of an operation is not met."""

    exit_code = 4


class PoleError(PreconditionError):
    """Gamma function evaluated at a non-positive integer."""


class NonConvergenceError(PreconditionError):
    """A series failed to converge within its term budget."""


class UnintegrableSingularityError(PreconditionError):
    """A singular start marker combined with an order that cannot absorb it."""


class TaylorMismatchError(PreconditionError):
    """Taylor coefficient vector of the wrong length for the requested order."""


class MembershipError(PreconditionError):
    """A norm was requested for a function outside the corresponding space."""


class ConstantInputError(PreconditionError):
    """An exponent fit was requested for data with no variation."""
