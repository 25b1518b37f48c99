"""
Decision tree from quadric invariants to the axisymmetric quadric types.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .algebra import (
    DEFAULT_TOLERANCE,
    QuadricCoeffs,
    QuadricInvariants,
    determinant,
    invariants,
    repeated_eigenvalues,
)
from .exceptions import ImaginarySurface, NotAxisymmetric

logger = logging.getLogger(__name__)


class AqKind(str, Enum):
    PROLATE_SPHEROID = 'ProlateSpheroid'
    OBLATE_SPHEROID = 'OblateSpheroid'
    SPHEROID_IMAGINARY = 'SpheroidImaginary'
    SPHERE_REAL = 'SphereReal'
    SPHERE_IMAGINARY = 'SphereImaginary'
    HYPERBOLOID_ONE_SHEET = 'HyperboloidOneSheet'
    HYPERBOLOID_TWO_SHEETS = 'HyperboloidTwoSheets'
    CONE_REAL = 'ConeReal'
    CONE_IMAGINARY = 'ConeImaginary'
    PARABOLOID = 'Paraboloid'
    CYLINDER_REAL = 'CylinderReal'
    CYLINDER_IMAGINARY = 'CylinderImaginary'
    NON_AXISYMMETRIC = 'NonAxisymmetric'

    def __str__(self):
        return self.value


IMAGINARY_KINDS = frozenset({
    AqKind.SPHEROID_IMAGINARY,
    AqKind.SPHERE_IMAGINARY,
    AqKind.CONE_IMAGINARY,
    AqKind.CYLINDER_IMAGINARY,
})


@dataclass(frozen=True)
class AqClass:
    """
    Result of classification.

    ``invariants`` are those of the normalized quadric ``factor · q``, where
    ``|factor| = 1/‖q‖∞`` and its sign makes the repeated eigenvalue positive.
    Their ``det_a`` is taken on the surface moved to its center or vertex.
    """

    kind: AqKind
    central: bool
    factor: float
    invariants: QuadricInvariants

    @property
    def is_real(self) -> bool:
        return self.kind not in IMAGINARY_KINDS and self.kind is not AqKind.NON_AXISYMMETRIC

    @property
    def lambda12(self) -> Optional[float]:
        """Repeated eigenvalue on the scale of the classified quadric."""
        value = self.invariants.lambda12
        return None if value is None else value / self.factor

    @property
    def lambda3(self) -> Optional[float]:
        value = self.invariants.lambda3
        return None if value is None else value / self.factor


def constant_minor_sum(q: QuadricCoeffs) -> float:
    """Sum of the 3×3 principal minors of A that keep the constant row."""
    A = q.matrix
    total = 0.0
    for dropped in range(3):
        keep = [i for i in range(4) if i != dropped]
        total += float(np.linalg.det(A[np.ix_(keep, keep)]))
    return total


def classify(inv: QuadricInvariants, q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> AqClass:
    """
    Classify ``q`` from its invariants.

    Every decision quantity is first rescaled to the quadric divided by
    ``‖q‖∞`` and oriented so the repeated eigenvalue is positive. A quantity
    then counts as zero when it is within ``tol`` times the matching power
    of ``‖B‖∞``. det(A) is taken on the surface moved to its center (or
    onto its axis), where the linear and constant terms no longer grow with
    the distance from the origin.
    """
    factor = 1.0 / q.scale
    n = inv.scaled(factor)
    unit = q.quadratic_scale * factor
    central = abs(n.j3) > tol * unit ** 3

    if abs(n.delta) > tol * unit ** 6:
        return AqClass(AqKind.NON_AXISYMMETRIC, central, factor, n)

    if not n.has_eigenvalues:
        n = _with_eigenvalues(n, tol * unit ** 2)
    if abs(n.lambda12) <= tol * unit:
        # rank-one quadratic part: a pair of planes
        return AqClass(AqKind.NON_AXISYMMETRIC, central, factor, n)
    if n.lambda12 < 0:
        factor, n = -factor, n.scaled(-1.0)

    moved = q.scaled(factor).centered(central)
    n = replace(n, det_a=determinant(moved, tol))
    # a centered quadric keeps only its constant, an uncentered one only its axial linear term
    size = abs(moved.d) if central else float(np.max(np.abs(moved.linear)))
    det_zero = abs(n.det_a) <= tol * max(unit, size) ** 4

    if not central:
        if not det_zero:
            kind = AqKind.PARABOLOID
        elif constant_minor_sum(moved) < 0:
            kind = AqKind.CYLINDER_REAL
        else:
            kind = AqKind.CYLINDER_IMAGINARY
        return AqClass(kind, False, factor, n)

    if det_zero:
        kind = AqKind.CONE_REAL if n.j3 < 0 else AqKind.CONE_IMAGINARY
    elif abs(n.a0) <= tol * unit ** 2:
        kind = AqKind.SPHERE_REAL if n.det_a < 0 else AqKind.SPHERE_IMAGINARY
    elif n.j3 < 0:
        kind = AqKind.HYPERBOLOID_TWO_SHEETS if n.det_a < 0 else AqKind.HYPERBOLOID_ONE_SHEET
    elif n.det_a > 0:
        kind = AqKind.SPHEROID_IMAGINARY
    elif abs(n.lambda12) > abs(n.lambda3):
        kind = AqKind.PROLATE_SPHEROID
    else:
        kind = AqKind.OBLATE_SPHEROID
    return AqClass(kind, True, factor, n)


def _with_eigenvalues(n: QuadricInvariants, zero: float) -> QuadricInvariants:
    lambda12, lambda3 = repeated_eigenvalues(n.j1, n.a0, n.a1, zero)
    return replace(n, lambda12=lambda12, lambda3=lambda3)


def classify_quadric(q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> AqClass:
    return classify(invariants(q, tol), q, tol)


def canonical_orientation(q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> Tuple[QuadricCoeffs, AqClass]:
    """
    Normalize ``q`` and classify it.

    Returns the scaled and oriented quadric together with its class, whose
    eigenvalues are then on the scale of the returned quadric.

    Raises:
        NotAxisymmetric: the quadric has no axis of symmetry.
        ImaginarySurface: the quadric has no real points.
    """
    cls = classify_quadric(q, tol)
    if cls.kind is AqKind.NON_AXISYMMETRIC:
        raise NotAxisymmetric(f"discriminant {cls.invariants.delta:.3e} is not zero")
    if not cls.is_real:
        raise ImaginarySurface(f"{cls.kind} has no real points")
    return q.scaled(cls.factor), replace(cls, factor=1.0)
