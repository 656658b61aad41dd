"""Exception hierarchy shared by all sheafgen modules."""


class SheafgenError(Exception):
    """Base class for every error raised by sheafgen."""


# laurent
class NotDivisible(SheafgenError, ArithmeticError):
    pass


class FractionalExponent(SheafgenError, ValueError):
    pass


class HodgeValidationError(SheafgenError, ValueError):
    """A Laurent polynomial is not the signed Hodge polynomial of a smooth projective variety."""


class NegativeHodgeNumber(HodgeValidationError):
    pass


class AsymmetricHodge(HodgeValidationError):
    pass


class DualityViolation(HodgeValidationError):
    pass


# qseries
class NonUnitConstantTerm(SheafgenError, ArithmeticError):
    pass


class NonDivergingLeadExponent(SheafgenError, RuntimeError):
    pass


class UnrepresentablePrefactor(SheafgenError, ValueError):
    pass


class BeyondTruncation(SheafgenError, IndexError):
    pass


# surface
class UndefinedDimension(SheafgenError, ValueError):
    pass


class NonIntegralImage(SheafgenError, ValueError):
    pass


class GcdViolation(SheafgenError, ValueError):
    pass


class OddParity(SheafgenError, ValueError):
    pass
