"""Exception hierarchy.

Input and region errors derive from :class:`InvalidInput` (CLI exit code 2),
numerical failures from :class:`NumericalFailure` (CLI exit code 3).
"""


class SwansonError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidInput(SwansonError, ValueError):
    pass


class NumericalFailure(SwansonError, RuntimeError):
    pass


class NotHermitian(InvalidInput):
    pass


class UnboundedBelow(InvalidInput):
    pass


class NotRealSpectrum(InvalidInput):
    pass


class InvalidRegion(InvalidInput):
    pass


class SingularDenominator(InvalidRegion):
    pass


class DimensionTooSmall(InvalidInput):
    pass


class InvalidOrder(InvalidInput):
    pass


class ZeroUnperturbedFrequency(InvalidInput):
    pass


class InsufficientOrders(InvalidInput):
    pass


class ConvergenceFailure(NumericalFailure):
    pass


class NoConvergedLevels(NumericalFailure):
    pass
