"""Exception types shared across the package."""


class LiftLabError(Exception):
    """Base class for all errors raised by liftlab."""


class GraphDisconnectedError(LiftLabError, ValueError):
    pass


class InvalidParameterError(LiftLabError, ValueError):
    pass


class DegreeMismatchError(LiftLabError, ValueError):
    pass


class SignatureMismatchError(LiftLabError, ValueError):
    pass


class BudgetExceededError(LiftLabError, RuntimeError):
    """An exhaustive computation would exceed its configured element budget."""


class InvalidWalkError(LiftLabError, ValueError):
    pass


class SizeLimitError(LiftLabError, ValueError):
    pass


class InsufficientFailuresError(LiftLabError, RuntimeError):
    """Raised when a log-log fit sees a zero count at some point."""
