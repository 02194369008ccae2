"""Exception hierarchy shared by all modules."""


class TomographyError(Exception):
    """Base class for every error raised by :mod:`puretomo`."""


class DimensionMismatch(TomographyError, ValueError):
    pass


class NotHermitian(TomographyError, ValueError):
    pass


class NonConvergence(TomographyError, ArithmeticError):
    pass


class SingularOperator(TomographyError, ArithmeticError):
    pass


class SingularGram(SingularOperator):
    """The summed operator G is not positive definite."""


class NonRealTrace(TomographyError, ValueError):
    pass


class ZeroVector(TomographyError, ValueError):
    pass


class EmptySupport(TomographyError, ValueError):
    pass


class NotPSD(TomographyError, ValueError):
    pass


class NotRank1(TomographyError, ValueError):
    pass


class NotAPovm(TomographyError, ValueError):
    pass


class IndexOutOfRange(TomographyError, IndexError):
    pass


class NegativeWeight(TomographyError, ValueError):
    pass


class NotPrime(TomographyError, ValueError):
    pass


class DimensionTooLarge(TomographyError, ValueError):
    pass


class MixedDimensions(TomographyError, ValueError):
    pass


class RangeError(TomographyError, ValueError):
    pass


class NegativeProbability(TomographyError, ValueError):
    pass


class InconsistentOutcomes(TomographyError, ValueError):
    """Outcome data are not reproduced by any pure state within tolerance."""


class AmbiguousOutcomes(TomographyError, ValueError):
    """Outcome data are consistent with more than one pure state."""


class UnknownFamily(TomographyError, ValueError):
    pass


class BadParams(TomographyError, ValueError):
    pass
