"""Exception types shared across the package."""


class VertexLabError(Exception):
    """Base class for package-specific errors."""


class ModeError(VertexLabError):
    """An operation was requested in exact mode that only exists in apfloat mode."""


class ArityMismatch(VertexLabError):
    """Upper and lower parameter lists of a basic hypergeometric series differ in length."""


class ParamOutOfRange(VertexLabError):
    """A distribution or model parameter lies outside its admissible range."""


class PoleError(ZeroDivisionError, VertexLabError):
    """A weight denominator vanished at the requested evaluation point."""


class UnsupportedPair(VertexLabError):
    """Cross weights requested for a specialization pair outside the supported table."""


class DegenerateVariables(VertexLabError):
    """Coinciding variables where a symmetrization denominator vanishes."""


DegeneratePoint = DegenerateVariables


class AdmissibilityError(VertexLabError):
    """Spectral parameters violate the convergence region of an infinite identity."""


class NonStochasticPoint(VertexLabError):
    """A local coupling encountered a negative weight."""


class ZeroMass(VertexLabError):
    """Both sides of a summation identity vanish; no coupling exists."""


class InvalidPath(VertexLabError):
    """A lattice path violates the down-right path constraints."""


class StateSpaceTooLarge(VertexLabError):
    """Exact enumeration was requested beyond the feasible state-space size."""


class WindowTooSmall(VertexLabError):
    """A particle trajectory needs vertex data outside the tracked window."""


class ContourConstraintViolated(VertexLabError):
    """A declared containment/exclusion constraint of an integration contour fails."""

    def __init__(self, constraint, detail=""):
        self.constraint = constraint
        super().__init__(f"contour constraint violated: {constraint}" + (f" ({detail})" if detail else ""))


class MomentDiverges(VertexLabError):
    """The requested moment is infinite at this parameter point."""


class NonConvergedQuadrature(VertexLabError):
    """Doubling the quadrature resolution moved the result by more than the tolerance."""


class ConfigError(VertexLabError):
    """A run configuration failed validation."""
