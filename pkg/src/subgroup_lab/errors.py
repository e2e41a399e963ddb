"""Exception types raised across the package."""


class SubgroupLabError(ValueError):
    """Base class for all input errors raised by subgroup_lab."""


class ZeroInverse(SubgroupLabError, ZeroDivisionError):
    pass


class NotADivisor(SubgroupLabError):
    pass


class DuplicateCoset(SubgroupLabError):
    pass


class ZeroDilation(SubgroupLabError):
    pass


class ZeroShift(SubgroupLabError):
    pass


class EmptySet(SubgroupLabError):
    pass


class BudgetExceeded(SubgroupLabError):
    pass


class ThetaNotReps(SubgroupLabError):
    pass


class ConfigInvalid(SubgroupLabError):
    pass


class InvariantViolation(AssertionError):
    """An identity that must hold exactly was observed to fail."""
