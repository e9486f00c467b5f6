"""Exception hierarchy shared by every module."""


class PrismkitError(Exception):
    """Base class for all library errors."""


class InvalidSpec(PrismkitError, ValueError):
    pass


class RingMismatch(PrismkitError, ValueError):
    pass


class NotDivisible(PrismkitError, ArithmeticError):
    pass


class PrecisionExhausted(PrismkitError, ArithmeticError):
    """Raised when an operation would leave fewer than one exact p-adic digit,
    or needs a valuation beyond the working cap."""


class NotRankOne(PrismkitError, ValueError):
    pass


class NotDistinguished(PrismkitError, ValueError):
    pass


class NotInUnitNygaard(PrismkitError, ValueError):
    pass


class TailNotNegligible(PrismkitError, ArithmeticError):
    pass


class IncompatibleRoots(PrismkitError, ValueError):
    pass


class FrontierExceeded(PrismkitError, ArithmeticError):
    pass


class NonInvertiblePsi(PrismkitError, ValueError):
    pass


class NotMinuscule(PrismkitError, ValueError):
    pass


class NoConvergenceWitness(PrismkitError, ArithmeticError):
    pass


class NonIntegralDual(PrismkitError, ValueError):
    pass


class NotInjective(PrismkitError, ValueError):
    pass


class NotEquivariant(PrismkitError, ValueError):
    pass


class FilNotComputable(PrismkitError, ArithmeticError):
    pass


class TooLarge(PrismkitError, ValueError):
    pass
