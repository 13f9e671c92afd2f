"""Exception types raised across the package."""


class AbelmixError(Exception):
    """Base class for all package errors."""


class InvalidGroupError(AbelmixError, ValueError):
    pass


class NotIrreducibleError(AbelmixError, ValueError):
    """The generators span a proper subgroup."""


class TypeConditionError(AbelmixError, ValueError):
    """The group is too small for the requested walk type (N < pi**r)."""


class ThresholdUndefinedError(AbelmixError, ValueError):
    """Requested distance exceeds the initial distance d(0)."""


class CapExceededError(AbelmixError, RuntimeError):
    """The distance is still above the threshold at the step cap."""


class BoundNotApplicableError(AbelmixError, ValueError):
    pass


class ConfigError(AbelmixError, ValueError):
    pass
