"""
End-to-end proximity from a point to an axisymmetric quadric.

    classify → axis and center → section frame → planar solve → lift to 3D

``proximity3d`` is the pure pipeline. ``ProximityEngine`` wraps it with the
project settings (tolerance, oracle resolution) for the batch commands,
the API and the Celery tasks.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from .algebra import DEFAULT_TOLERANCE, QuadricCoeffs, QuadricInvariants, invariants
from .classify import AqClass, canonical_orientation, classify
from .exceptions import DegenerateConic, InvalidQuadric
from .proximity2d import PlanarProximity, conic_proximity, on_curve
from .reduce import (
    AxialFrame,
    ConicForm,
    axis_of_symmetry,
    build_frame,
    center_or_vertex,
    conic_form,
    lift_point,
    project_point,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ProximityResult:
    aq_class: AqClass
    frame: AxialFrame
    conic: ConicForm
    planar: PlanarProximity
    pp: np.ndarray
    footpoints3d: np.ndarray
    r_min: float
    value: float

    @property
    def on_surface(self) -> bool:
        return self.r_min == 0.0

    @property
    def side(self) -> str:
        """Sign of the normalized quadric at the query point."""
        if self.on_surface:
            return 'on'
        return 'inside' if self.value < 0 else 'outside'

    @property
    def nearest(self) -> np.ndarray:
        return self.footpoints3d[int(np.argmin(self.planar.distances))]


def _as_point(p0) -> np.ndarray:
    point = np.asarray(p0, dtype=float).reshape(-1)
    if point.shape != (3,) or not np.all(np.isfinite(point)):
        raise InvalidQuadric(f"query point must be three finite numbers, got {p0!r}")
    return point


def reduce_query(q: QuadricCoeffs, p0, tol: float = DEFAULT_TOLERANCE):
    """
    Normalize, classify and reduce; shared by the pipeline and the oracle.

    Returns:
        (normalized quadric, class, v3, pc)
    """
    qn, cls = canonical_orientation(q, tol)
    v3 = axis_of_symmetry(qn, cls.lambda3, tol)
    pc = center_or_vertex(qn, cls, v3, tol)
    return qn, cls, v3, pc


def proximity3d(q: QuadricCoeffs, p0, tol: float = DEFAULT_TOLERANCE) -> ProximityResult:
    """
    Minimum distance from ``p0`` to the surface ``q`` with every normal
    foot-point found in the section plane.

    Raises:
        NotAxisymmetric: the quadric has no axis of symmetry.
        ImaginarySurface: the quadric has no real points.
        DegenerateConic: the section degenerates where a proper conic is needed.
    """
    p0 = _as_point(p0)
    qn, cls, v3, pc = reduce_query(q, p0, tol)
    frame = build_frame(qn, cls, pc, v3, p0, tol)
    conic = conic_form(qn, cls, frame, tol)
    pp = project_point(frame, p0, conic.rotated)

    value = float(qn.evaluate(p0))
    # first-order distance to the surface against the query's own length scale
    slope = float(np.linalg.norm(qn.gradient(p0)))
    if abs(value) <= tol * slope * max(1.0, float(np.linalg.norm(p0 - pc))):
        planar = on_curve(pp)
    else:
        planar = conic_proximity(conic, pp, tol)

    footpoints3d = np.array([lift_point(frame, fp, conic.rotated) for fp in planar.footpoints])
    if not (np.isfinite(planar.r_min) and np.all(np.isfinite(footpoints3d))):
        raise DegenerateConic(f"non-finite distance for {p0.tolist()} ({cls.kind}, case {planar.case_tag})")
    if planar.r_min == 0.0:
        footpoints3d[int(np.argmin(planar.distances))] = p0

    return ProximityResult(
        aq_class=cls,
        frame=frame,
        conic=conic,
        planar=planar,
        pp=pp,
        footpoints3d=footpoints3d,
        r_min=planar.r_min,
        value=value,
    )


def transform_quadric(q: QuadricCoeffs, rotation, translation) -> QuadricCoeffs:
    """
    Coefficients of the surface moved by ``x' = rotation·x + translation``.

    Substitutes ``x = rotationᵀ(x' − translation)``, i.e. ``A' = Mᵀ A M``
    with ``M = [[Rᵀ, −Rᵀt], [0, 1]]``.
    """
    R = np.asarray(rotation, dtype=float)
    t = np.asarray(translation, dtype=float)
    M = np.eye(4)
    M[:3, :3] = R.T
    M[:3, 3] = -R.T @ t
    return QuadricCoeffs.from_matrix(M.T @ q.matrix @ M)


# ==================== SETTINGS-BACKED FACADE ====================

class ProximityEngine:
    """
    Settings-aware entry point used by the queries app.
    One instance per process, shared by every request and task.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @staticmethod
    def _setting(name: str, default):
        from django.conf import settings

        if not settings.configured:
            return default
        return getattr(settings, name, default)

    @property
    def tolerance(self) -> float:
        return float(self._setting('QUADRIC_TOLERANCE', DEFAULT_TOLERANCE))

    @property
    def oracle_resolution(self) -> int:
        return int(self._setting('QUADRIC_ORACLE_RESOLUTION', 200))

    def classify(self, q: QuadricCoeffs, tol: Optional[float] = None):
        """
        Returns:
            (AqClass, invariants of q as given)
        """
        tol = tol or self.tolerance
        inv: QuadricInvariants = invariants(q, tol)
        return classify(inv, q, tol), inv

    def proximity(self, q: QuadricCoeffs, p0, tol: Optional[float] = None) -> ProximityResult:
        tol = tol or self.tolerance
        result = proximity3d(q, p0, tol)
        logger.debug(
            f"{result.aq_class.kind} r_min={result.r_min:.6g} case={result.planar.case_tag}"
        )
        return result

    def oracle(self, q: QuadricCoeffs, p0, resolution: Optional[int] = None,
               tol: Optional[float] = None) -> float:
        from .oracle import oracle_min_distance

        return oracle_min_distance(q, p0, resolution or self.oracle_resolution, tol or self.tolerance)

    def describe(self) -> Dict[str, Any]:
        return {
            'tolerance': self.tolerance,
            'oracle_resolution': self.oracle_resolution,
        }


_engine_instance = None


def get_proximity_engine() -> ProximityEngine:
    """Get or create the process-wide engine."""
    global _engine_instance

    if _engine_instance is None:
        _engine_instance = ProximityEngine()

    return _engine_instance
