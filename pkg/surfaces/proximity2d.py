"""
Normal foot-points and minimum distance from a planar point to a conic in
standard form.

Each solver reports every foot-point it finds, the distance to each, and a
tag naming the branch that produced them, so batch output can be traced
back to the case split.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from .algebra import DEFAULT_TOLERANCE, companion_real_roots, cubic_real_roots, quartic_real_roots
from .exceptions import DegenerateConic, OnCurve, ResolventFailure
from .reduce import ConicForm, ConicKind

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


class CaseTag(str, Enum):
    A1 = 'a.1'
    A2 = 'a.2'
    B1 = 'b.1'
    B2 = 'b.2'
    B3 = 'b.3'
    B4 = 'b.4'
    C1 = 'c.1'
    C2 = 'c.2'
    C3 = 'c.3'
    DIRECT = 'direct'
    ON_CURVE = 'on_curve'

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class PlanarProximity:
    footpoints: np.ndarray
    params: Tuple[float, ...]
    distances: Tuple[float, ...]
    r_min: float
    case_tag: CaseTag
    tie: bool = False

    @property
    def nearest(self) -> np.ndarray:
        return self.footpoints[int(np.argmin(self.distances))]


def _result(pp: np.ndarray, footpoints, tag: CaseTag, params: Sequence[float] = (),
            tie: bool = False) -> PlanarProximity:
    footpoints = np.asarray(footpoints, dtype=float).reshape(-1, 2)
    if not len(footpoints):
        raise ResolventFailure(f"no foot-point found for {pp.tolist()} (case {tag})")
    if not np.all(np.isfinite(footpoints)):
        raise DegenerateConic(f"non-finite foot-point for {pp.tolist()} (case {tag})")
    distances = tuple(float(value) for value in np.linalg.norm(footpoints - pp, axis=1))
    return PlanarProximity(
        footpoints=footpoints,
        params=tuple(float(t) for t in params),
        distances=distances,
        r_min=min(distances),
        case_tag=tag,
        tie=tie,
    )


def on_curve(pp) -> PlanarProximity:
    """Result for a point that already lies on the conic."""
    pp = np.asarray(pp, dtype=float)
    return _result(pp, [pp], CaseTag.ON_CURVE)


# ==================== CIRCLE ====================

def circle_proximity(pp, r0: float, tol: float = DEFAULT_TOLERANCE) -> PlanarProximity:
    pp = np.asarray(pp, dtype=float)
    rho = float(np.linalg.norm(pp))
    if rho <= tol * r0:
        return _result(pp, [[r0, 0.0]], CaseTag.DIRECT, tie=True)
    direction = pp / rho
    return _result(pp, [r0 * direction, -r0 * direction], CaseTag.DIRECT)


# ==================== PARABOLA u1² = 4γ u2 ====================

def parabola_proximity(pp, gamma: float, tol: float = DEFAULT_TOLERANCE) -> PlanarProximity:
    """
    Foot-points on the parabola ``u1² = 4γ·u2`` with ``γ > 0``.

    On the axis the answer is the vertex, unless the point sits inside the
    parabola beyond the center of curvature at the vertex (``u2 > 2γ``),
    where two symmetric normals exist. Off the axis the foot-point parameter
    ``t`` solves

        t³ − 2(u2 + γ)t² + u2(u2 + 4γ)t − γ(u1² + 2u2²) = 0

    and maps to the foot-point ``[2γ·u1/(t − u2), t − 2γ]``.

    Raises:
        OnCurve: the point lies on the parabola.
    """
    if gamma <= 0:
        raise DegenerateConic(f"parabola focal parameter must be positive, got {gamma}")
    pp = np.asarray(pp, dtype=float)
    u1p, u2p = float(pp[0]), float(pp[1])

    eta = u1p * u1p - 4 * gamma * u2p
    if abs(eta) <= tol * max(gamma * gamma, u1p * u1p, 4 * gamma * abs(u2p)):
        raise OnCurve(f"point {pp.tolist()} lies on the parabola")
    inside = eta < 0

    if abs(u1p) <= tol * max(gamma, abs(u2p)):
        if inside and u2p > 2 * gamma:
            u1s = 2 * math.sqrt(gamma * (u2p - 2 * gamma))
            return _result(pp, [[u1s, u2p - 2 * gamma], [-u1s, u2p - 2 * gamma]], CaseTag.A2, tie=True)
        return _result(pp, [[0.0, 0.0]], CaseTag.A1)

    roots = cubic_real_roots(-2 * (u2p + gamma), u2p * (u2p + 4 * gamma), -gamma * (u1p * u1p + 2 * u2p * u2p), tol)
    tag = {
        'three_distinct': CaseTag.B1,
        'simple_and_double': CaseTag.B2,
        'one_real': CaseTag.B3,
        'cube_root': CaseTag.B4,
        'triple': CaseTag.B4,
    }[roots.case]
    footpoints = [[2 * gamma * u1p / (t - u2p), t - 2 * gamma] for t in roots.roots]
    return _result(pp, footpoints, tag, params=roots.roots)


# ==================== ELLIPSE / HYPERBOLA ====================

def _regime(x: float, u2p: float, e2: float) -> Tuple[float, float]:
    """Sign test of the off-axis quartic and the magnitude of its terms."""
    e3 = x - u2p * u2p
    inner = e2 * (SQRT3 + e3 / e2) ** 2 + (3 - 2 * SQRT3) * e3
    delta1 = -16 * e2 * e2 * x * u2p * u2p * (e2 * e2 + 27 * x * u2p * u2p + e3 * inner)
    magnitude = 16 * e2 * e2 * abs(x) * u2p * u2p * (
        e2 * e2 + 27 * abs(x) * u2p * u2p
        + abs(e3) * (e2 * (SQRT3 + abs(e3) / e2) ** 2 + (2 * SQRT3 - 3) * abs(e3))
    )
    return delta1, magnitude


def central_conic_proximity(pp, n: float, e: float, tol: float = DEFAULT_TOLERANCE) -> PlanarProximity:
    """
    Foot-points on the ellipse (``e < 1``) or hyperbola (``e > 1``) with
    major or transverse semi-axis ``n`` along u2, written as

        u1² − e1·u2² + n²·e1 = 0,   e1 = e² − 1

    A foot-point with parameter ``t`` sits at ``(1/e²)·[u1·t·e1/(t − u2), t]``.
    Points on the u2 axis solve a quadratic, points on the u1 axis have
    direct answers, and the rest solve the quartic

        t⁴ − 2u2·t³ + (u2² − e2 − e1·u1²)t² + 2e2·u2·t − e2·u2² = 0

    with ``e2 = n²e⁴``.

    Raises:
        OnCurve: the point lies on the conic.
    """
    if n <= 0 or e < 0 or e == 1:
        raise DegenerateConic(f"not a central conic: n={n}, e={e}")
    pp = np.asarray(pp, dtype=float)
    u1p, u2p = float(pp[0]), float(pp[1])

    esq = e * e
    e1 = esq - 1
    e2 = n * n * esq * esq
    m = n * math.sqrt(abs(e1))

    residual = (u1p * u1p - e1 * u2p * u2p) / (e1 * n * n) + 1
    if abs(residual) <= tol:
        raise OnCurve(f"point {pp.tolist()} lies on the conic")

    scale = max(n, abs(u1p), abs(u2p))
    on_major = abs(u1p) <= tol * scale
    on_minor = abs(u2p) <= tol * scale

    if on_major:
        u2s = u2p / esq
        u1s_sq = -e1 * (n * n - u2s * u2s)
        if u1s_sq > tol * scale * scale:
            u1s = math.sqrt(u1s_sq)
            return _result(pp, [[u1s, u2s], [-u1s, u2s]], CaseTag.A1, params=(u2p, u2p), tie=True)
        return _result(pp, [[0.0, n], [0.0, -n]], CaseTag.A2, tie=on_minor)

    if on_minor:
        if e < 1:
            return _result(pp, [[m, 0.0], [-m, 0.0]], CaseTag.B1)
        t = math.sqrt(e2 + e1 * u1p * u1p)
        footpoints = [[e1 * u1p / esq, t / esq], [e1 * u1p / esq, -t / esq]]
        return _result(pp, footpoints, CaseTag.B2, params=(t, -t), tie=True)

    x = e1 * u1p * u1p
    coefficients = (-2 * u2p, u2p * u2p - e2 - x, 2 * e2 * u2p, -e2 * u2p * u2p)
    roots = quartic_real_roots(*coefficients, tol)
    if len(roots) < 2:
        # an off-axis point has at least two normals to an ellipse or a hyperbola
        logger.warning(
            f"Closed-form quartic found {len(roots)} root(s) for pp={pp.tolist()}, n={n}, e={e}; "
            f"using the companion matrix"
        )
        roots = companion_real_roots(coefficients, tol)
    delta1, magnitude = _regime(x, u2p, e2)

    if abs(delta1) <= tol * tol * magnitude:
        tag, expected = CaseTag.C2, 3
    elif delta1 > 0:
        tag, expected = CaseTag.C1, 4
    else:
        tag, expected = CaseTag.C3, 2
    if len(roots) != expected:
        logger.warning(
            f"Quartic regime {tag} expects {expected} distinct roots, solver found {len(roots)} "
            f"(delta1={delta1:.3e}, pp={pp.tolist()}, n={n}, e={e})"
        )

    if logger.isEnabledFor(logging.DEBUG):
        e3 = x - u2p * u2p
        delta2 = 2 * (e2 ** 3 + e2 * e2 * (3 * x - 2 * u2p * u2p) + e3 * e3 * x
                      + e2 * ((SQRT3 * x - u2p * u2p) ** 2 + x * u2p * u2p * (14 + 2 * SQRT3)))
        logger.debug(f"Quartic regime {tag}: delta1={delta1:.3e}, delta2={delta2:.3e}")

    footpoints = [[u1p * t * e1 / (esq * (t - u2p)), t / esq] for t in roots.roots]
    return _result(pp, footpoints, tag, params=roots.roots)


# ==================== LINE PAIRS ====================

def intersecting_lines_proximity(pp, m1: float) -> PlanarProximity:
    """Foot-points on the lines ``√m1·u1 ∓ u2 = 0``."""
    pp = np.asarray(pp, dtype=float)
    slope = math.sqrt(m1)
    directions = np.array([[1.0, slope], [1.0, -slope]]) / math.sqrt(1 + m1)
    footpoints = [np.dot(pp, direction) * direction for direction in directions]
    return _result(pp, footpoints, CaseTag.DIRECT)


def parallel_lines_proximity(pp, m: float) -> PlanarProximity:
    """Foot-points on the lines ``u1 = ±m``."""
    pp = np.asarray(pp, dtype=float)
    return _result(pp, [[m, pp[1]], [-m, pp[1]]], CaseTag.DIRECT)


# ==================== DISPATCH ====================

def conic_proximity(conic: ConicForm, pp, tol: float = DEFAULT_TOLERANCE) -> PlanarProximity:
    """Route ``pp`` to the solver for ``conic``; on-curve points short-circuit."""
    try:
        if conic.kind is ConicKind.CIRCLE:
            return circle_proximity(pp, conic.r0, tol)
        if conic.kind is ConicKind.PARABOLA:
            return parabola_proximity(pp, conic.gamma, tol)
        if conic.kind in (ConicKind.ELLIPSE, ConicKind.HYPERBOLA):
            return central_conic_proximity(pp, conic.n, conic.e, tol)
        if conic.kind is ConicKind.INTERSECTING_LINES:
            return intersecting_lines_proximity(pp, conic.m1)
        return parallel_lines_proximity(pp, conic.m)
    except OnCurve:
        return on_curve(pp)
