"""Exception types shared across the package."""


class ProjectionError(ValueError):
    """Stereographic projection evaluated at its excluded pole."""


class ConfigurationError(ValueError):
    """A region or chart configuration violates its stated constraints."""


class DegeneracyError(ArithmeticError):
    """A conformal-metric operation hit a point where the form density <= 0."""


class NumericalFault(ArithmeticError):
    """A finite-difference stencil left the valid domain of a field."""


class QuadratureError(ArithmeticError):
    """Quadrature error estimate exceeded the requested target."""
