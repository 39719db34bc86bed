"""Exception hierarchy.

Two branches matter to callers: ValidationError (bad inputs, CLI exit 2)
and NumericError (a numeric routine could not deliver its accuracy
contract, CLI exit 3).
"""


class ProxcorError(Exception):
    pass


class ValidationError(ProxcorError):
    pass


class NumericError(ProxcorError):
    pass


class ConstantVector(ValidationError):
    """Zero sample variance: correlation is undefined."""


class DimensionTooSmall(ValidationError):
    """Fewer than 3 entries: the fixed-correlation sphere is undefined."""


class DimensionMismatch(ValidationError):
    pass


class DegenerateCoplanar(ValidationError):
    """|rho(u, v)| = 1: the third basis axis is undefined."""


class InvalidDof(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class QuadratureFailure(NumericError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ApproximationBreakdown(NumericError):
    """Sampling-distribution parameters left their valid regime."""


class TooFewRecords(ValidationError):
    pass


class EmptyBand(ValidationError):
    """No ensemble record fell inside the accuracy band."""


class InfeasibleConfig(ValidationError):
    pass


class FileFormatError(ValidationError):
    pass
