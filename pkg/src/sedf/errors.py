"""Exception hierarchy shared by every module."""


class SedfError(ValueError):
    """Base class for all errors raised by this package."""


class NotPrime(SedfError):
    pass


class ReducibleModulus(SedfError):
    pass


class NotPrimitive(SedfError):
    pass


class OrderTooLarge(SedfError):
    pass


class ZeroInverse(SedfError, ZeroDivisionError):
    pass


class NotAField(SedfError):
    pass


class OrderDoesNotDivide(SedfError):
    pass


class NotSemiprimitive(SedfError):
    pass


class OddDegree(SedfError):
    pass


class GroupMismatch(SedfError):
    pass


class ZeroInSet(SedfError):
    pass


class NotADs(SedfError):
    pass


class NotAPds(SedfError):
    pass


class NotSymmetric(SedfError):
    pass


class NotAPartition(SedfError):
    pass


class NotDisjoint(SedfError):
    pass


class DegenerateSet(SedfError):
    pass


class ConditionNotMet(SedfError):
    pass


class NotSubsetOfClass(SedfError):
    pass
