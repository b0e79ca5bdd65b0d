"""Exception hierarchy.

Three branches, matching the CLI exit-code contract:
config errors (exit 1), numerical errors (exit 2), IO failures (exit 3).
"""


class DiracsigError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class ConfigError(DiracsigError):
    """Invalid configuration, parameters, or schema."""

    exit_code = 1


class RangeError(ConfigError):
    """Parameter outside its admissible range."""


class ModelMismatchError(ConfigError):
    """Operands belong to different space-time models or masses."""


class UnsupportedSymmetryError(ConfigError):
    """Symmetry name not defined for the given model."""


class ResolutionError(ConfigError):
    """Quadrature order below the resolution rule for the requested modes."""


class SchemaError(ConfigError):
    """Serialized document does not match the expected schema."""


class NumericalError(DiracsigError):
    """A numerical contract was violated."""

    exit_code = 2


class ConditioningError(NumericalError):
    """Gram matrix condition number exceeds the trust threshold."""


class HermiticityError(NumericalError):
    """Matrix expected to be (Gram-)Hermitian is not, beyond tolerance."""


class SpanEscapeError(NumericalError):
    """A pushed-forward basis mode left the truncated span."""


class DegenerateModeError(NumericalError):
    """Mode amplitude system is singular (massless zero-momentum pair)."""


class SupportEscapeError(NumericalError):
    """Transformed test-function support left the model domain."""


class DomainError(NumericalError):
    """Point lies outside the (closed) model domain."""


class AxiomViolationError(NumericalError):
    """A symmetry action violates one of its defining identities."""


class IOFailure(DiracsigError):
    """File input/output failed."""

    exit_code = 3
