"""
Error types raised by the quadric pipeline.

Every public error carries a short ``code`` that the batch commands and the
HTTP API put in their error records, so callers can branch on it without
parsing messages.
"""


class QuadricError(Exception):
    """Base class for all quadric pipeline errors."""

    code = 'quadric_error'

    def __init__(self, message: str = ''):
        super().__init__(message or self.__class__.__doc__)


class InvalidQuadric(QuadricError):
    """Coefficients are not a valid quadric."""

    code = 'invalid_quadric'


class NotAxisymmetric(QuadricError):
    """The quadric has no axis of rotational symmetry."""

    code = 'not_axisymmetric'


class ImaginarySurface(QuadricError):
    """The quadric has no real points."""

    code = 'imaginary_surface'


class DegenerateConic(QuadricError):
    """The axial section degenerates where a proper conic is required."""

    code = 'degenerate_conic'


class OnCurve(QuadricError):
    """The planar point lies on the conic."""

    code = 'on_curve'


class ResolventFailure(QuadricError):
    """The resolvent cubic produced no real root."""

    code = 'resolvent_failure'


# Internal signals, caught inside the pipeline.

class DegenerateGaussianPivot(QuadricError):
    """A pivot of the determinant elimination vanished."""

    code = 'degenerate_pivot'


class AxisAlignedFallback(QuadricError):
    """The axis is perpendicular to the parametrizing coordinate."""

    code = 'axis_aligned'
