"""Exception hierarchy shared by every layer of the toolkit.

All math-layer failures derive from :class:`MahlerError`; the CLI maps them
to exit code 3 and prints the class name.
"""


class MahlerError(Exception):
    """Base class for math-layer errors."""


class PreconditionError(MahlerError, ValueError):
    pass


class CompositionOrderError(PreconditionError):
    """Inner function of a composition does not vanish at 0."""


class TruncationError(MahlerError):
    """A coefficient beyond the known order was requested or needed."""


class IllPosedError(MahlerError):
    pass


class AmbiguousError(MahlerError):
    """Constant-term system is singular and no seed was supplied."""


class RejectedError(MahlerError):
    """The requested mode is not meaningful for this object."""


class PoleError(MahlerError):
    pass


class PrecisionExhausted(MahlerError):
    pass


class NoConvergenceError(MahlerError):
    pass


class DegenerateError(MahlerError):
    pass


class InconclusiveError(MahlerError):
    pass


class SaturationError(MahlerError):
    """Vanishing order reached the truncation; maximality is not certified."""

    def __init__(self, message, witness=None, order=None):
        super().__init__(message)
        self.witness = witness
        self.order = order


class InfeasibleError(MahlerError):
    pass


class DegreeOverflowError(MahlerError):
    pass


class TailBoundError(MahlerError):
    pass


class ConditionError(MahlerError):
    pass


class NotAdmissibleError(PreconditionError):
    """Raised where an operation needs an admissible exponent set (calculators return a value instead)."""
