"""Exception types raised across the package."""


class RepGeomError(Exception):
    """Base class for every error this package raises on purpose."""


class NonFinite(RepGeomError):
    """Input contains NaN or infinite entries."""


class IncomparablePoints(RepGeomError):
    """Manifold points differ in metric, payload shape, or embedding parameters."""


class TangentBaseMismatch(RepGeomError):
    """Tangent vector is not based at the expected manifold point."""


class DegenerateGeodesic(RepGeomError):
    """Geodesic endpoints coincide (distance below the degeneracy threshold)."""


class AntipodalPoints(RepGeomError):
    """Spherical log map is not unique: points are (numerically) antipodal."""


class DegenerateAngle(RepGeomError):
    """Angle vertex coincides with one of the other two points."""


class ZeroAfterCentering(RepGeomError):
    """Gram matrix vanishes after centering (constant representation)."""


class ShapeMismatch(RepGeomError):
    """Matrix dimensions do not agree."""


class ZeroNormShape(RepGeomError):
    """Pre-shape has zero Frobenius norm; angular quantities are undefined."""


class RankDeficientWhitening(RepGeomError):
    """Partial whitening hit a covariance direction it cannot invert."""


class SingularSylvester(RepGeomError):
    """Sylvester system for the vertical component has no solution."""


class NotPositiveDefinite(RepGeomError):
    """Matrix is not symmetric positive definite where one is required."""


class IllConditioned(RepGeomError):
    """Matrix condition number exceeds the supported range."""


class TooFewRows(RepGeomError):
    """Requested subsample size exceeds the available row count."""


class MetricMismatch(RepGeomError):
    """Reports being combined were produced under different configurations."""


class InvalidDistanceMatrix(RepGeomError):
    """Distance matrix is not symmetric, nonnegative, and zero-diagonal."""


class UnsupportedDtype(RepGeomError):
    """File stores a dtype outside the supported set."""


class ShapeError(RepGeomError):
    """Loaded array is neither 1-D nor 2-D."""


class ParseError(RepGeomError):
    """File could not be parsed; carries a location when known."""

    def __init__(self, message, line=None, offset=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if offset is not None:
            loc.append(f"byte {offset}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.line = line
        self.offset = offset


class ManifestError(RepGeomError):
    """Dataset manifest is malformed or inconsistent with its files."""
