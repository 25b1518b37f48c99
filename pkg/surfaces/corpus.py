"""
Reference cases and case generators.

``GOLDEN_CASES`` are eight worked quadrics with query points and reference
values published to four decimals; the coefficients are given as printed
(undoubled cross and linear terms). ``canonical_quadric`` and
``random_case`` build axis-aligned surfaces and move them rigidly, for the
randomized checks and the bench.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from .algebra import QuadricCoeffs
from .classify import AqKind
from .engine import transform_quadric

GOLDEN_TOLERANCE = 1e-4

QUERY_POINT = (-0.7230, 0.8655, 0.5549)
FAR_QUERY_POINT = (6.1658, 1.1438, -0.6710)


@dataclass(frozen=True)
class GoldenCase:
    id: str
    kind: AqKind
    polynomial: Tuple[float, ...]
    point: Tuple[float, float, float]
    j3: float
    det_a: float
    lambda12: float
    lambda3: float
    r_min: float
    distances: Tuple[float, ...] = ()
    params: Tuple[float, ...] = ()
    pc: Optional[Tuple[float, float, float]] = None
    pp: Optional[Tuple[float, float]] = None
    n: Optional[float] = None
    e: Optional[float] = None
    extra: Dict[str, float] = field(default_factory=dict)

    @property
    def coeffs(self) -> QuadricCoeffs:
        return QuadricCoeffs.from_polynomial(*self.polynomial)

    def as_record(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'coeffs': self.coeffs.as_dict(),
            'point': list(self.point),
            'tol': GOLDEN_TOLERANCE,
        }


GOLDEN_CASES: List[GoldenCase] = [
    GoldenCase(
        id='prolate-spheroid', kind=AqKind.PROLATE_SPHEROID,
        polynomial=(1, 0.6356, 0.8175, 0.1688, -0.5550, 0.1223, 1.7758, -0.5803, 1.5783, 1.1956),
        point=QUERY_POINT, j3=0.4315, det_a=-0.1204, lambda12=1.0186, lambda3=0.4159,
        pc=(-0.8546, 0.2070, -0.8311), n=0.8192, e=0.7692, pp=(0.8220, 1.3024),
        params=(0.4646, 0.4169), distances=(2.3025, 0.8157), r_min=0.8157,
    ),
    GoldenCase(
        id='oblate-spheroid', kind=AqKind.OBLATE_SPHEROID,
        polynomial=(1, 1.1353, 2.9544, 0.0184, 1.0310, 0.0698, -0.4631, 1.4665, 2.4198, -0.0556),
        point=QUERY_POINT, j3=3.0871, det_a=-2.6952, lambda12=0.9994, lambda3=3.0910,
        pc=(0.2475, -0.5002, -0.3252), n=0.9347, e=0.8226, pp=(1.1823, 1.4778),
        params=(0.6018, 0.5180), distances=(2.7229, 1.1300), r_min=1.1300,
    ),
    GoldenCase(
        id='hyperboloid-one-sheet', kind=AqKind.HYPERBOLOID_ONE_SHEET,
        polynomial=(1, -1.5451, -0.2746, 1.1787, -3.8765, 0.8541, 2.1749, -1.5747, 1.0761, 0.7673),
        point=QUERY_POINT, j3=-3.9310, det_a=3.0356, lambda12=1.1299, lambda3=-3.0794,
        n=0.8267, e=1.1692, pp=(1.3024, 0.8220),
        params=(1.2247, 1.8263), distances=(2.0363, 0.8418), r_min=0.8418,
    ),
    GoldenCase(
        id='hyperboloid-two-sheets', kind=AqKind.HYPERBOLOID_TWO_SHEETS,
        polynomial=(1, -1.1826, -0.0930, 1.0109, -3.3244, 0.7325, 2.1086, -1.4094, 1.1596, 2.1724),
        point=QUERY_POINT, j3=-3.0858, det_a=-1.9864, lambda12=1.1114, lambda3=-2.4984,
        n=0.5076, e=1.8022, pp=(0.8220, 1.3024),
        params=(1.7968, 2.8212), distances=(1.9198, 0.4933), r_min=0.4933,
    ),
    GoldenCase(
        id='paraboloid', kind=AqKind.PARABOLOID,
        polynomial=(1, 0.9884, 0.02411, 0.0211, 0.2648, -0.1568, -1.5177, 0.3121, -6.3089, -0.3723),
        point=FAR_QUERY_POINT, j3=0.0, det_a=-10.3493, lambda12=1.0063, lambda3=0.0,
        pc=(0.4950, 0.2826, -0.1122), pp=(5.7589, 0.2196),
        params=(5.0642,), distances=(3.1161,), r_min=3.1161,
        extra={'gamma_hat': 1.5885},
    ),
    GoldenCase(
        id='cylinder', kind=AqKind.CYLINDER_REAL,
        polynomial=(1, 0.5766, 0.4321, 0.0864, -0.9895, 0.0999, 0.7423, 0.0880, -0.0113, -5.6730),
        point=FAR_QUERY_POINT, j3=0.0, det_a=0.0, lambda12=1.0044, lambda3=0.0,
        pp=(6.6747, 20.6088), r_min=4.2691,
        extra={'m': 2.4056},
    ),
    GoldenCase(
        id='cone', kind=AqKind.CONE_REAL,
        polynomial=(1, 0.1537, 0.5762, 0.3920, -1.2890, 0.2840, 1.8640, -0.8000, 1.4673, 1.4891),
        point=QUERY_POINT, j3=-0.3879, det_a=0.0, lambda12=1.0432, lambda3=-0.3564,
        pp=(0.8220, 1.3024), distances=(0.0524, 1.3669), r_min=0.0524,
    ),
    GoldenCase(
        id='sphere', kind=AqKind.SPHERE_REAL,
        polynomial=(1, 1, 1, 0, 0, 0, -0.4950, 1.0004, 0.6503, -0.4538),
        point=QUERY_POINT, j3=1.0, det_a=-0.8710, lambda12=1.0, lambda3=1.0,
        pc=(0.2475, -0.5002, -0.3251), pp=(1.6754, 0.8801),
        distances=(0.9592, 2.8258), r_min=0.9592,
        extra={'r0': 0.9333},
    ),
]


def golden_case(case_id: str) -> GoldenCase:
    for case in GOLDEN_CASES:
        if case.id == case_id:
            return case
    raise KeyError(case_id)


def corpus_records() -> List[Dict[str, Any]]:
    return [case.as_record() for case in GOLDEN_CASES]


# ==================== CANONICAL SURFACES ====================

def canonical_quadric(kind: AqKind, radial: float = 1.0, axial: float = 1.0,
                      focal: float = 1.0) -> QuadricCoeffs:
    """
    Axis-aligned surface with the z axis as its axis of symmetry and the
    center (or vertex) at the origin.

    ``radial`` and ``axial`` are the semi-axes across and along the axis;
    ``focal`` is the paraboloid focal distance (x² + y² = 4·focal·z).
    """
    ra, ax = 1.0 / radial ** 2, 1.0 / axial ** 2
    if kind in (AqKind.PROLATE_SPHEROID, AqKind.OBLATE_SPHEROID):
        return QuadricCoeffs(ra, ra, ax, 0, 0, 0, 0, 0, 0, -1)
    if kind is AqKind.SPHERE_REAL:
        return QuadricCoeffs(1, 1, 1, 0, 0, 0, 0, 0, 0, -radial ** 2)
    if kind is AqKind.HYPERBOLOID_ONE_SHEET:
        return QuadricCoeffs(ra, ra, -ax, 0, 0, 0, 0, 0, 0, -1)
    if kind is AqKind.HYPERBOLOID_TWO_SHEETS:
        return QuadricCoeffs(-ra, -ra, ax, 0, 0, 0, 0, 0, 0, -1)
    if kind is AqKind.CONE_REAL:
        return QuadricCoeffs(ra, ra, -ax, 0, 0, 0, 0, 0, 0, 0)
    if kind is AqKind.PARABOLOID:
        return QuadricCoeffs(1, 1, 0, 0, 0, 0, 0, 0, -2 * focal, 0)
    if kind is AqKind.CYLINDER_REAL:
        return QuadricCoeffs(1, 1, 0, 0, 0, 0, 0, 0, 0, -radial ** 2)
    raise ValueError(f"no canonical form for {kind}")


RANDOM_KINDS = (
    AqKind.PROLATE_SPHEROID,
    AqKind.OBLATE_SPHEROID,
    AqKind.SPHERE_REAL,
    AqKind.HYPERBOLOID_ONE_SHEET,
    AqKind.HYPERBOLOID_TWO_SHEETS,
    AqKind.CONE_REAL,
    AqKind.PARABOLOID,
    AqKind.CYLINDER_REAL,
)


@dataclass(frozen=True)
class RandomCase:
    kind: AqKind
    coeffs: QuadricCoeffs
    point: np.ndarray
    rotation: np.ndarray
    translation: np.ndarray
    canonical: QuadricCoeffs
    local_point: np.ndarray


def random_case(rng: np.random.Generator, kind: Optional[AqKind] = None,
                reach: float = 10.0) -> RandomCase:
    """
    Canonical surface with random shape, rotated at random, translated by up
    to ``reach`` characteristic sizes along each coordinate and multiplied by
    a random nonzero factor, plus a query point within ``reach``
    characteristic sizes of the center.
    """
    if kind is None:
        kind = RANDOM_KINDS[int(rng.integers(len(RANDOM_KINDS)))]

    radial = float(rng.uniform(0.5, 3.0))
    if kind is AqKind.PROLATE_SPHEROID:
        axial = radial * float(rng.uniform(1.3, 3.0))
    elif kind is AqKind.OBLATE_SPHEROID:
        axial = radial / float(rng.uniform(1.3, 3.0))
    else:
        axial = float(rng.uniform(0.5, 3.0))
    focal = float(rng.uniform(0.5, 2.0))
    canonical = canonical_quadric(kind, radial=radial, axial=axial, focal=focal)

    size = max(radial, axial, focal)
    rotation = Rotation.random(random_state=rng).as_matrix()
    translation = rng.uniform(-reach, reach, size=3) * size
    factor = float(rng.uniform(0.2, 5.0)) * (1 if rng.random() < 0.5 else -1)
    coeffs = transform_quadric(canonical, rotation, translation).scaled(factor)

    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    local_point = direction * reach * size * float(rng.random()) ** (1 / 3)
    point = rotation @ local_point + translation
    return RandomCase(
        kind=kind, coeffs=coeffs, point=point, rotation=rotation,
        translation=translation, canonical=canonical, local_point=local_point,
    )
