"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedKindError(InvalidArgumentError):
    """The requested operation is not defined for this operator kind."""


class RepresentationError(ValueError):
    """A function cannot be represented in the requested space to tolerance."""


class InsufficientDataError(ValueError):
    """Too few usable modes or samples to perform the requested fit/check."""


class ModeRangeError(ValueError):
    """A mode index outside the converged range was requested."""
