"""
Reduction of a point-to-quadric query to a point-to-conic query.

An axisymmetric quadric cut by the plane through its axis and the query
point is a conic. This module finds the axis and the center (or vertex),
builds the orthonormal frame of that plane, and expresses the section and
the query point in it.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .algebra import DEFAULT_TOLERANCE, QuadricCoeffs
from .classify import AqClass, AqKind
from .exceptions import AxisAlignedFallback, DegenerateConic, ImaginarySurface, NotAxisymmetric

logger = logging.getLogger(__name__)


# ==================== TYPES ====================

class ConicKind(str, Enum):
    CIRCLE = 'Circle'
    ELLIPSE = 'EllipseMajorU2'
    HYPERBOLA = 'HyperbolaMajorU2'
    PARABOLA = 'Parabola'
    INTERSECTING_LINES = 'IntersectingLines'
    PARALLEL_LINES = 'ParallelLines'

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class AxialFrame:
    """
    Orthonormal frame of the plane through the axis and the query point.

    ``u2`` runs along the axis, ``u3`` is the plane normal and ``u1`` lies in
    the plane. ``gamma_l`` is only set for paraboloids.
    """

    pc: np.ndarray
    v3: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    gamma: float
    gamma_l: Optional[float] = None
    collinear: bool = False

    @property
    def rotation(self) -> np.ndarray:
        return np.column_stack([self.u1, self.u2, self.u3])


@dataclass(frozen=True)
class ConicForm:
    """
    Standard form of the axial section.

    Ellipses and hyperbolas are stored with the major (transverse) axis along
    u2: ``n`` is that semi-axis and ``m`` the other one. ``rotated`` records
    that the planar frame was turned a quarter turn clockwise to get there.
    """

    kind: ConicKind
    e: float
    rotated: bool = False
    m: Optional[float] = None
    n: Optional[float] = None
    r0: Optional[float] = None
    gamma: Optional[float] = None
    m1: Optional[float] = None

    def residual(self, pp) -> float:
        """Dimensionless value of the conic equation at a planar point."""
        u1, u2 = float(pp[0]), float(pp[1])
        if self.kind is ConicKind.CIRCLE:
            return (u1 * u1 + u2 * u2) / self.r0 ** 2 - 1
        if self.kind is ConicKind.ELLIPSE:
            return u1 * u1 / self.m ** 2 + u2 * u2 / self.n ** 2 - 1
        if self.kind is ConicKind.HYPERBOLA:
            return u2 * u2 / self.n ** 2 - u1 * u1 / self.m ** 2 - 1
        if self.kind is ConicKind.PARABOLA:
            return (u1 * u1 / (4 * self.gamma) - u2) / self.gamma
        if self.kind is ConicKind.PARALLEL_LINES:
            return u1 * u1 / self.m ** 2 - 1
        return (self.m1 * u1 * u1 - u2 * u2) / (1 + self.m1)

    def sample(self, count: int, extent: float = 3.0) -> np.ndarray:
        """Points on the conic, for checks and plotting."""
        s = np.linspace(-1.0, 1.0, count)
        if self.kind is ConicKind.CIRCLE:
            angle = np.pi * s
            return self.r0 * np.column_stack([np.cos(angle), np.sin(angle)])
        if self.kind is ConicKind.ELLIPSE:
            angle = np.pi * s
            return np.column_stack([self.m * np.cos(angle), self.n * np.sin(angle)])
        if self.kind is ConicKind.HYPERBOLA:
            arg = extent * s
            sheet = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
            return np.column_stack([self.m * np.sinh(arg), sheet * self.n * np.cosh(arg)])
        if self.kind is ConicKind.PARABOLA:
            u1 = extent * self.gamma * s * 4
            return np.column_stack([u1, u1 * u1 / (4 * self.gamma)])
        if self.kind is ConicKind.PARALLEL_LINES:
            side = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
            return np.column_stack([side * self.m, extent * self.m * s])
        side = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
        u1 = extent * s
        return np.column_stack([u1, side * math.sqrt(self.m1) * u1])


# ==================== AXIS ====================

def _orient(v: np.ndarray) -> np.ndarray:
    total = v.sum()
    if abs(total) > 1e-12:
        return v if total > 0 else -v
    lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    return v if lead > 0 else -v


def axis_of_symmetry(q: QuadricCoeffs, lambda3: float, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    Unit vector spanning the nullspace of λ3·I − B.

    The leading row is the row with a nonzero first entry and the largest
    norm; the other two rows are eliminated against it and the axis is the
    cross product of the leading row with the larger remainder. Spheres,
    whose nullspace is everything, get the z axis.
    """
    B1 = lambda3 * np.eye(3) - q.quadratic
    zero = tol * q.quadratic_scale

    if np.max(np.abs(B1)) <= zero:
        logger.debug("Spherical quadratic part, any axis works: using z")
        return np.array([0.0, 0.0, 1.0])

    leading = [i for i in range(3) if abs(B1[i, 0]) > zero]
    if not leading:
        return np.array([1.0, 0.0, 0.0])

    norms = np.linalg.norm(B1, axis=1)
    lead = max(leading, key=lambda i: norms[i])
    w1 = B1[lead]
    remainders = [
        np.array([0.0,
                  w1[0] * B1[i, 1] - w1[1] * B1[i, 0],
                  w1[0] * B1[i, 2] - w1[2] * B1[i, 0]])
        for i in range(3) if i != lead
    ]
    w = max(remainders, key=np.linalg.norm)

    if np.linalg.norm(w) <= zero * norms[lead]:
        # rank one: every row is a multiple of the leading one
        v3 = np.array([-(w1[1] + w1[2]) / w1[0], 1.0, 1.0])
    else:
        v3 = np.cross(w1, w)
    return _orient(_finite(v3 / np.linalg.norm(v3), 'axis'))


# ==================== CENTER / VERTEX ====================

def _finite(value: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise DegenerateConic(f"{what} is not finite: {np.asarray(value).tolist()}")
    return value


def _require_divisor(value: float, zero: float, what: str) -> None:
    if abs(value) <= zero:
        raise DegenerateConic(f"{what} vanishes ({value:.3e})")


def _aligned_axis(v3: np.ndarray, tol: float) -> Optional[int]:
    for k in range(3):
        others = np.delete(v3, k)
        if np.max(np.abs(others)) <= tol:
            return k
    return None


def _central_center(q: QuadricCoeffs) -> np.ndarray:
    a, b, c, f, g, h, p, q_, r, _ = q.as_array()
    j3 = a * (b * c - g * g) - c * f * f + h * (2 * f * g - b * h)
    return np.array([
        p * (g * g - b * c) + q_ * (c * f - g * h) + r * (b * h - f * g),
        p * (c * f - g * h) + q_ * (h * h - c * a) + r * (a * g - h * f),
        p * (b * h - f * g) + q_ * (a * g - h * f) + r * (f * f - a * b),
    ]) / j3


def _axis_line(q: QuadricCoeffs, v3: np.ndarray, tol: float):
    """
    The axis as a function of its x coordinate, from the gradient condition
    ∇S ∥ v3. Requires the axis to cross the planes x = const.
    """
    a, b, c, f, g, h, p, q_, r, _ = q.as_array()
    x3, y3, z3 = v3
    delta1 = x3 * (b * c - g * g) + y3 * (g * h - c * f) + z3 * (f * g - b * h)
    if abs(delta1) <= tol * q.quadratic_scale ** 2:
        raise AxisAlignedFallback(f"axis is perpendicular to x (delta1={delta1:.3e})")

    def point(xc: float) -> np.ndarray:
        yc = (x3 * (g * r + xc * (g * h - c * f) - c * q_)
              + y3 * (c * p + xc * (c * a - h * h) - h * r)
              + z3 * (h * q_ + xc * (h * f - a * g) - g * p)) / delta1
        zc = (x3 * (g * q_ + xc * (f * g - b * h) - b * r)
              + y3 * (f * r + xc * (h * f - a * g) - g * p)
              + z3 * (b * p + xc * (a * b - f * f) - f * q_)) / delta1
        return np.array([xc, yc, zc])

    return point


def _vertex_on_line(q: QuadricCoeffs, v3: np.ndarray, tol: float) -> np.ndarray:
    point = _axis_line(q, v3, tol)
    # S is linear along the axis of a paraboloid
    s0 = float(q.evaluate(point(0.0)))
    slope = float(q.evaluate(point(1.0))) - s0
    if abs(slope) <= tol * q.quadratic_scale:
        raise DegenerateConic("quadric does not vary along its axis")
    return point(-s0 / slope)


def _aligned_vertex(q: QuadricCoeffs, axis: int, tol: float) -> np.ndarray:
    a, b, c, _, _, _, p, q_, r, d = q.as_array()
    radial, linear = (c, q.linear[axis]) if axis == 1 else (b, q.linear[axis])
    _require_divisor(radial, tol * q.quadratic_scale, 'radial coefficient')
    _require_divisor(linear, tol * q.quadratic_scale, 'axial linear coefficient')
    if axis == 2:
        return -np.array([p, q_, -(p * p + q_ * q_ - b * d) / (2 * r)]) / b
    if axis == 1:
        return -np.array([p, -(p * p + r * r - c * d) / (2 * q_), r]) / c
    return -np.array([-(q_ * q_ + r * r - b * d) / (2 * p), q_, r]) / b


def _aligned_axis_point(q: QuadricCoeffs, axis: int, tol: float) -> np.ndarray:
    a, b, c, _, _, _, p, q_, r, _ = q.as_array()
    _require_divisor(c if axis == 1 else b, tol * q.quadratic_scale, 'radial coefficient')
    if axis == 0:
        return np.array([1.0, -q_ / b, -r / b])
    if axis == 1:
        return np.array([-p / c, 1.0, -r / c])
    return np.array([-p / b, -q_ / b, 1.0])


def _relabelled(q: QuadricCoeffs, v3: np.ndarray, tol: float, solve) -> np.ndarray:
    """Run ``solve`` with coordinates cycled so the axis crosses x = const."""
    try:
        return solve(q, v3, tol)
    except AxisAlignedFallback as exc:
        shift = 1 if abs(v3[1]) >= abs(v3[2]) else 2
        logger.debug(f"{exc}; relabelling coordinates by {shift}")
        point = solve(q.cycled(shift), np.roll(v3, -shift), tol)
        return np.roll(point, shift)


def center_or_vertex(q: QuadricCoeffs, cls: AqClass, v3: np.ndarray,
                     tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    Center of a central quadric, vertex of a paraboloid, or a point on the
    axis of a cylinder.

    Raises:
        NotAxisymmetric: for non-axisymmetric input.
        ImaginarySurface: for imaginary classes.
    """
    if cls.kind is AqKind.NON_AXISYMMETRIC:
        raise NotAxisymmetric('no axis of symmetry')
    if not cls.is_real:
        raise ImaginarySurface(f"{cls.kind} has no real points")

    if cls.central:
        return _finite(_central_center(q), 'center')

    axis = _aligned_axis(v3, tol)
    if cls.kind is AqKind.PARABOLOID:
        if axis is not None:
            return _finite(_aligned_vertex(q, axis, tol), 'vertex')
        return _finite(_relabelled(q, v3, tol, _vertex_on_line), 'vertex')

    if axis is not None:
        point = _aligned_axis_point(q, axis, tol)
    else:
        point = _relabelled(q, v3, tol, lambda qq, vv, tt: _axis_line(qq, vv, tt)(1.0))
    return _finite(_onto_least_squares_axis(q, point, v3, tol), 'axis point')


def _onto_least_squares_axis(q: QuadricCoeffs, point: np.ndarray, v3: np.ndarray, tol: float) -> np.ndarray:
    """Slide a cylinder axis point onto the minimum-norm solution line of B x = −c."""
    anchor = np.linalg.lstsq(q.quadratic, -q.linear, rcond=tol)[0]
    return anchor + np.dot(point - anchor, v3) * v3


# ==================== FRAME ====================

def build_frame(q: QuadricCoeffs, cls: AqClass, pc: np.ndarray, v3: np.ndarray, p0,
                tol: float = DEFAULT_TOLERANCE) -> AxialFrame:
    """
    Frame of the plane through the axis and ``p0``.

    The plane normal is ``(p0 − pc) × v3``, which puts the query point at a
    non-negative u1 coordinate. When ``p0`` lies on the axis any plane
    through the axis will do. Paraboloid frames point u2 into the opening.
    """
    p0 = np.asarray(p0, dtype=float)
    u2 = np.asarray(v3, dtype=float)
    gamma_l = None
    if cls.kind is AqKind.PARABOLOID:
        gamma_l = 2 * float(np.dot(u2, q.linear + q.quadratic @ pc))
        if gamma_l * cls.lambda12 > 0:
            u2, gamma_l = -u2, -gamma_l

    offset = p0 - pc
    normal = np.cross(offset, u2)
    collinear = np.linalg.norm(normal) <= tol * np.linalg.norm(offset) or not np.any(normal)
    if collinear:
        axis = np.zeros(3)
        axis[int(np.argmin(np.abs(u2)))] = 1.0
        normal = np.cross(u2, axis)
        logger.debug("Query point on the axis, choosing the section plane by convention")

    u3 = normal / np.linalg.norm(normal)
    u1 = np.cross(u2, u3)
    return AxialFrame(
        pc=np.asarray(pc, dtype=float), v3=np.asarray(v3, dtype=float),
        u1=u1, u2=u2, u3=u3,
        gamma=float(q.evaluate(pc)), gamma_l=gamma_l, collinear=bool(collinear),
    )


# ==================== CONIC ====================

def conic_form(q: QuadricCoeffs, cls: AqClass, frame: AxialFrame,
               tol: float = DEFAULT_TOLERANCE) -> ConicForm:
    """
    Standard form of the section ``λ12·u1² + λ3·u2² + γ = 0`` (or
    ``λ12·u1² + γ_l·u2 = 0`` for paraboloids).

    Raises:
        DegenerateConic: when the constant vanishes for a class that needs it.
    """
    kind = cls.kind
    lam12, lam3 = abs(cls.lambda12), abs(cls.lambda3)
    gamma = frame.gamma

    if kind is AqKind.PARABOLOID:
        if frame.gamma_l is None or abs(frame.gamma_l) <= tol * q.quadratic_scale:
            raise DegenerateConic('paraboloid has no linear term along its axis')
        return ConicForm(ConicKind.PARABOLA, e=1.0, gamma=-frame.gamma_l / (4 * cls.lambda12))

    if kind is AqKind.CONE_REAL:
        return ConicForm(ConicKind.INTERSECTING_LINES, e=math.inf, m1=lam12 / lam3)

    if abs(gamma) <= tol * q.quadratic_scale:
        raise DegenerateConic(f"{kind} section has a vanishing constant term")

    radial = math.sqrt(abs(gamma) / lam12)
    if kind is AqKind.CYLINDER_REAL:
        return ConicForm(ConicKind.PARALLEL_LINES, e=math.inf, m=radial)
    if kind is AqKind.SPHERE_REAL:
        return ConicForm(ConicKind.CIRCLE, e=0.0, r0=radial)

    axial = math.sqrt(abs(gamma) / lam3)
    if kind in (AqKind.PROLATE_SPHEROID, AqKind.OBLATE_SPHEROID):
        rotated = radial > axial
        n, m = (radial, axial) if rotated else (axial, radial)
        if n <= m:
            raise DegenerateConic('spheroid section is a circle')
        return ConicForm(ConicKind.ELLIPSE, e=math.sqrt(1 - (m / n) ** 2), rotated=rotated, m=m, n=n)

    if kind is AqKind.HYPERBOLOID_ONE_SHEET:
        n, m, rotated = radial, axial, True
    else:
        n, m, rotated = axial, radial, False
    return ConicForm(ConicKind.HYPERBOLA, e=math.sqrt(1 + (m / n) ** 2), rotated=rotated, m=m, n=n)


# ==================== PLANAR COORDINATES ====================

def project_point(frame: AxialFrame, p0, rotated: bool) -> np.ndarray:
    offset = np.asarray(p0, dtype=float) - frame.pc
    xp, yp = float(np.dot(frame.u1, offset)), float(np.dot(frame.u2, offset))
    return np.array([-yp, xp]) if rotated else np.array([xp, yp])


def lift_point(frame: AxialFrame, pp, rotated: bool) -> np.ndarray:
    """Inverse of ``project_point`` for points of the section plane."""
    x, y = float(pp[0]), float(pp[1])
    if rotated:
        x, y = y, -x
    return frame.pc + x * frame.u1 + y * frame.u2
