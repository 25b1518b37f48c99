"""
Brute-force distance oracle.

Samples the surface of revolution on a dense (azimuth, profile) grid built
from the recovered axis and the section constants, then refines the best
sample by alternating bounded one-dimensional minimizations. It shares only
the classification and axis recovery with the closed-form pipeline, so it
serves as an independent check of the foot-point solvers.
"""

import logging
import math
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .algebra import DEFAULT_TOLERANCE, QuadricCoeffs
from .classify import AqKind

logger = logging.getLogger(__name__)

REFINE_SWEEPS = 8
REFINE_STARTS = 6

# profile(s) -> (radius, height) along the axis
Profile = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _perpendicular_basis(v3: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(v3)))] = 1.0
    e1 = np.cross(v3, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(v3, e1)


def _patches(kind: AqKind, lam12: float, lam3: float, gamma: float, gamma_l: float,
             reach: float, h0: float) -> List[Tuple[float, float, Profile]]:
    """Parametric patches (lower, upper, profile) covering the surface near the query."""
    radial = math.sqrt(abs(gamma / lam12)) if gamma else 0.0
    axial = math.sqrt(abs(gamma / lam3)) if gamma and lam3 else 0.0

    if kind in (AqKind.PROLATE_SPHEROID, AqKind.OBLATE_SPHEROID, AqKind.SPHERE_REAL):
        return [(-math.pi / 2, math.pi / 2, lambda s: (radial * np.cos(s), axial * np.sin(s)))]
    if kind is AqKind.HYPERBOLOID_ONE_SHEET:
        return [(-reach, reach, lambda s: (radial * np.sqrt(1 + (s / axial) ** 2), s))]
    if kind is AqKind.HYPERBOLOID_TWO_SHEETS:
        return [
            (0.0, reach, lambda s: (s, axial * np.sqrt(1 + (s / radial) ** 2))),
            (0.0, reach, lambda s: (s, -axial * np.sqrt(1 + (s / radial) ** 2))),
        ]
    if kind is AqKind.CONE_REAL:
        slope = math.sqrt(lam12 / abs(lam3))
        return [
            (0.0, reach, lambda s: (s, slope * s)),
            (0.0, reach, lambda s: (s, -slope * s)),
        ]
    if kind is AqKind.PARABOLOID:
        return [(0.0, reach, lambda s: (s, -lam12 * s * s / gamma_l))]
    if kind is AqKind.CYLINDER_REAL:
        return [(h0 - reach, h0 + reach, lambda s: (np.full_like(s, radial), s))]
    raise ValueError(f"no parametrization for {kind}")


def oracle_min_distance(q: QuadricCoeffs, p0, resolution: int = 200,
                        tol: float = DEFAULT_TOLERANCE) -> float:
    """
    Minimum distance from ``p0`` to ``q`` by dense sampling and local refinement.

    The grid has ``resolution`` azimuths and ``resolution`` profile samples
    per patch. Refinement starts from each local minimum along the profile
    (best azimuth per profile sample), so nearly tied basins are all tried.

    Raises:
        NotAxisymmetric, ImaginarySurface: as for the closed-form pipeline.
    """
    from .engine import reduce_query

    p0 = np.asarray(p0, dtype=float)
    qn, cls, v3, pc = reduce_query(q, p0, tol)
    lam12, lam3 = cls.lambda12, cls.lambda3
    gamma = float(qn.evaluate(pc))
    gamma_l = 2 * float(np.dot(v3, qn.linear + qn.quadratic @ pc))

    e1, e2 = _perpendicular_basis(v3)
    offset = p0 - pc
    h0 = float(np.dot(offset, v3))
    size = max(
        math.sqrt(abs(gamma / lam12)) if lam12 else 0.0,
        math.sqrt(abs(gamma / lam3)) if lam3 else 0.0,
        abs(gamma_l / lam12) if cls.kind is AqKind.PARABOLOID else 0.0,
    )
    reach = 2 * float(np.linalg.norm(offset)) + 2 * size + 1.0

    def surface_point(theta, s, profile: Profile) -> np.ndarray:
        rho, height = profile(s)
        radial = np.cos(theta)[..., None] * e1 + np.sin(theta)[..., None] * e2
        return pc + rho[..., None] * radial + height[..., None] * v3

    best = math.inf
    thetas = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)
    for lower, upper, profile in _patches(cls.kind, lam12, lam3, gamma, gamma_l, reach, h0):
        s_values = np.linspace(lower, upper, resolution)
        theta_grid, s_grid = np.meshgrid(thetas, s_values, indexing='ij')
        distances = np.linalg.norm(surface_point(theta_grid, s_grid, profile) - p0, axis=-1)
        along = distances.min(axis=0)
        padded = np.concatenate([[np.inf], along, [np.inf]])
        minima = np.flatnonzero((along <= padded[:-2]) & (along <= padded[2:]))
        starts = minima[np.argsort(along[minima])][:REFINE_STARTS]

        d_theta = 2 * math.pi / resolution
        d_s = (upper - lower) / max(resolution - 1, 1)

        def distance(t: float, u: float) -> float:
            point = surface_point(np.array([t]), np.array([u]), profile)[0]
            return float(np.linalg.norm(point - p0))

        for j in starts:
            i = int(np.argmin(distances[:, j]))
            best = min(best, _refine(distance, float(thetas[i]), float(s_values[j]), float(distances[i, j]),
                                     d_theta, d_s, lower, upper))

    logger.debug(f"Oracle {cls.kind} at resolution {resolution}: {best:.9g}")
    return best


def _refine(distance: Callable[[float, float], float], theta: float, s: float, current: float,
            d_theta: float, d_s: float, lower: float, upper: float) -> float:
    """Alternate bounded 1D minimizations over azimuth and profile parameter."""
    for _ in range(REFINE_SWEEPS):
        previous = current
        step = minimize_scalar(lambda t: distance(t, s), bounds=(theta - 2 * d_theta, theta + 2 * d_theta),
                               method='bounded', options={'xatol': 1e-12})
        if step.fun < current:
            theta, current = float(step.x), float(step.fun)
        step = minimize_scalar(lambda u: distance(theta, u),
                               bounds=(max(lower, s - 2 * d_s), min(upper, s + 2 * d_s)),
                               method='bounded', options={'xatol': 1e-12})
        if step.fun < current:
            s, current = float(step.x), float(step.fun)
        if previous - current <= 1e-15:
            break
    return current
