"""Exception types raised by the package."""


class SKError(ValueError):
    """Base class for all errors raised by skalpha."""


class ZeroConstantTerm(SKError):
    pass


class BadConstantTerm(SKError):
    pass


class CompositionRequiresZeroConstant(SKError):
    pass


class NonzeroConstantTerm(SKError):
    pass


class NotNormalized(SKError):
    pass


class SeriesFormatError(SKError):
    """Malformed series JSON document."""


class ParameterRangeError(SKError):
    """A parameter lies outside the range where the class is defined."""


class OutOfTheoremRange(SKError):
    """A formula was requested outside the parameter range where it holds."""


class PoleProximity(SKError):
    pass


class DenominatorNonpositive(SKError):
    pass


class InsufficientTerms(SKError):
    pass


class GridTooCoarse(SKError):
    pass


class TailTooLarge(SKError):
    pass


class IllConditioned(SKError):
    """Double precision cannot resolve the requested evaluation."""


class DegenerateCurve(SKError):
    pass
