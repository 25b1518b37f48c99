"""
Scalar kernels for quadric surfaces.

Holds the coefficient value type, the rotation invariants used by the
classifier, and closed-form real-root solvers for monic cubics and quartics.
Everything here is a pure function of its inputs.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DegenerateGaussianPivot, InvalidQuadric, ResolventFailure

logger = logging.getLogger(__name__)

COEFF_NAMES = ('a', 'b', 'c', 'f', 'g', 'h', 'p', 'q', 'r', 'd')
QUADRATIC_NAMES = COEFF_NAMES[:6]
DEFAULT_TOLERANCE = 1e-6

NEWTON_STEPS = 2


# ==================== COEFFICIENTS ====================

@dataclass(frozen=True)
class QuadricCoeffs:
    """
    Coefficients of

        a x² + b y² + c z² + 2f xy + 2g yz + 2h xz + 2p x + 2q y + 2r z + d = 0

    Cross and linear terms are stored halved, so the symmetric matrix views
    read the fields directly.
    """

    a: float
    b: float
    c: float
    f: float
    g: float
    h: float
    p: float
    q: float
    r: float
    d: float

    def __post_init__(self):
        for name in COEFF_NAMES:
            object.__setattr__(self, name, float(getattr(self, name)))
        values = self.as_array()
        if not np.all(np.isfinite(values)):
            raise InvalidQuadric('non-finite coefficient')
        if not np.any(values[:6] != 0.0):
            raise InvalidQuadric('degenerate: no quadratic terms')

    # ---- constructors ----

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> 'QuadricCoeffs':
        missing = [name for name in COEFF_NAMES if name not in mapping]
        if missing:
            raise InvalidQuadric(f"missing coefficient(s): {', '.join(missing)}")
        return cls(**{name: mapping[name] for name in COEFF_NAMES})

    @classmethod
    def from_polynomial(cls, xx, yy, zz, xy, yz, xz, x, y, z, const) -> 'QuadricCoeffs':
        """Build from the polynomial as printed, with undoubled cross and linear terms."""
        return cls(xx, yy, zz, xy / 2, yz / 2, xz / 2, x / 2, y / 2, z / 2, const)

    @classmethod
    def from_matrices(cls, quadratic: np.ndarray, linear: np.ndarray, constant: float) -> 'QuadricCoeffs':
        B = np.asarray(quadratic, dtype=float)
        c = np.asarray(linear, dtype=float)
        return cls(B[0, 0], B[1, 1], B[2, 2], B[0, 1], B[1, 2], B[0, 2], c[0], c[1], c[2], constant)

    @classmethod
    def from_matrix(cls, A: np.ndarray) -> 'QuadricCoeffs':
        A = np.asarray(A, dtype=float)
        A = (A + A.T) / 2
        return cls.from_matrices(A[:3, :3], A[:3, 3], A[3, 3])

    # ---- views ----

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in COEFF_NAMES], dtype=float)

    def as_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in COEFF_NAMES}

    @property
    def quadratic(self) -> np.ndarray:
        """The symmetric 3×3 matrix B."""
        return np.array([
            [self.a, self.f, self.h],
            [self.f, self.b, self.g],
            [self.h, self.g, self.c],
        ])

    @property
    def linear(self) -> np.ndarray:
        return np.array([self.p, self.q, self.r])

    @property
    def matrix(self) -> np.ndarray:
        """The symmetric 4×4 matrix A of the homogeneous form."""
        A = np.zeros((4, 4))
        A[:3, :3] = self.quadratic
        A[:3, 3] = A[3, :3] = self.linear
        A[3, 3] = self.d
        return A

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    @property
    def quadratic_scale(self) -> float:
        """‖B‖∞, the yardstick for zero tests that must not move with the surface."""
        return float(np.max(np.abs(self.as_array()[:6])))

    # ---- algebra ----

    def scaled(self, k: float) -> 'QuadricCoeffs':
        return QuadricCoeffs(*(k * self.as_array()))

    def normalized(self) -> 'QuadricCoeffs':
        return self.scaled(1.0 / self.scale)

    def cycled(self, shift: int) -> 'QuadricCoeffs':
        """
        Relabel coordinates cyclically: shift=1 maps (x, y, z) to (y, z, x).
        A point p of the original surface is ``np.roll(p, -shift)`` here.
        """
        order = np.roll(np.arange(3), -shift)
        B = self.quadratic[np.ix_(order, order)]
        return QuadricCoeffs.from_matrices(B, self.linear[order], self.d)

    def centered(self, central: bool = True) -> 'QuadricCoeffs':
        """
        The same surface translated so the origin is its center. Without a
        center the origin goes to the point of the axis nearest the old
        origin, and the linear part left over lies along the axis.
        """
        B = self.quadratic
        if central:
            shift = np.linalg.solve(B, -self.linear)
        else:
            values, vectors = np.linalg.eigh(B)
            # drop the eigenvector of the vanishing eigenvalue
            order = np.argsort(np.abs(values))[1:]
            keep = vectors[:, order]
            shift = -keep @ ((keep.T @ self.linear) / values[order])
        return QuadricCoeffs.from_matrices(B, self.linear + B @ shift, float(self.evaluate(shift)))

    def evaluate(self, x) -> np.ndarray:
        """S(x); accepts a single point or an array of points on the last axis."""
        x = np.asarray(x, dtype=float)
        B = self.quadratic
        return np.einsum('...i,ij,...j->...', x, B, x) + 2 * x @ self.linear + self.d

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 2 * (x @ self.quadratic + self.linear)


# ==================== INVARIANTS ====================

@dataclass(frozen=True)
class QuadricInvariants:
    j1: float
    j2: float
    j3: float
    det_a: float
    a0: float
    a1: float
    delta: float
    lambda12: Optional[float] = None
    lambda3: Optional[float] = None

    @property
    def has_eigenvalues(self) -> bool:
        return self.lambda12 is not None

    def scaled(self, k: float) -> 'QuadricInvariants':
        """Invariants of ``k·q`` given these are the invariants of ``q``."""
        return replace(
            self,
            j1=k * self.j1,
            j2=k ** 2 * self.j2,
            j3=k ** 3 * self.j3,
            det_a=k ** 4 * self.det_a,
            a0=k ** 2 * self.a0,
            a1=k ** 3 * self.a1,
            delta=k ** 6 * self.delta,
            lambda12=None if self.lambda12 is None else k * self.lambda12,
            lambda3=None if self.lambda3 is None else k * self.lambda3,
        )

    def as_dict(self) -> Dict[str, Optional[float]]:
        return {
            'J1': self.j1,
            'J2': self.j2,
            'J3': self.j3,
            'det_a': self.det_a,
            'a0': self.a0,
            'a1': self.a1,
            'delta': self.delta,
            'lambda12': self.lambda12,
            'lambda3': self.lambda3,
        }


def determinant_by_elimination(q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> float:
    """
    det(A) by two steps of Gaussian elimination on the 4×4 matrix.

    Raises:
        DegenerateGaussianPivot: when ``a`` or ``b - f²/a`` vanishes.
    """
    a, b, c, f, g, h, p, q_, r, d = q.as_array()
    zero = tol * q.quadratic_scale
    if abs(a) <= zero:
        raise DegenerateGaussianPivot('first pivot vanishes')
    alpha = 1.0 / a
    pivot = b - f * f * alpha
    if abs(pivot) <= zero:
        raise DegenerateGaussianPivot('second pivot vanishes')
    beta = 1.0 / pivot

    phi = g - f * h * alpha
    psi = q_ - f * p * alpha
    c2 = c - h * h * alpha
    r2 = r - h * p * alpha
    d2 = d - p * p * alpha

    minor = (c2 - beta * phi * phi) * (d2 - beta * psi * psi) - (r2 - beta * phi * psi) ** 2
    return a * pivot * minor


def _det3(M: np.ndarray) -> float:
    return float(
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )


def determinant_by_cofactors(A: np.ndarray) -> float:
    """det of a 4×4 matrix by cofactor expansion along its first row."""
    A = np.asarray(A, dtype=float)
    total = 0.0
    for j in range(4):
        if A[0, j] == 0.0:
            continue
        minor = np.delete(A[1:], j, axis=1)
        total += (-1) ** j * A[0, j] * _det3(minor)
    return total


def determinant(q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> float:
    """det(A), by elimination when both pivots are usable."""
    try:
        return determinant_by_elimination(q, tol)
    except DegenerateGaussianPivot as exc:
        logger.debug(f"Elimination pivot fallback ({exc}), using cofactor expansion")
        return determinant_by_cofactors(q.matrix)


def invariants(q: QuadricCoeffs, tol: float = DEFAULT_TOLERANCE) -> QuadricInvariants:
    """
    Rotation invariants of ``q`` and, when the quadratic part has a repeated
    eigenvalue, the eigenvalues themselves.

    Zero tests are relative to ``‖B‖∞`` raised to each quantity's degree,
    so they do not depend on where the surface sits.
    """
    a, b, c, f, g, h = q.as_array()[:6]
    s = q.quadratic_scale

    j1 = a + b + c
    j2 = a * b + b * c + c * a - (f * f + g * g + h * h)
    j3 = a * (b * c - g * g) - c * f * f + h * (2 * f * g - b * h)

    det_a = determinant(q, tol)

    a0 = j2 - j1 * j1 / 3
    a1 = -2 * j1 ** 3 / 27 + j1 * j2 / 3 - j3
    delta = 4 * a0 ** 3 + 27 * a1 ** 2

    lambda12 = lambda3 = None
    if abs(delta) <= tol * s ** 6:
        lambda12, lambda3 = repeated_eigenvalues(j1, a0, a1, tol * s * s)

    return QuadricInvariants(
        j1=j1, j2=j2, j3=j3, det_a=det_a, a0=a0, a1=a1, delta=delta,
        lambda12=lambda12, lambda3=lambda3,
    )


def repeated_eigenvalues(j1: float, a0: float, a1: float, zero: float) -> Tuple[float, float]:
    """(λ12, λ3) of a depressed characteristic cubic with vanishing discriminant."""
    if abs(a0) <= zero:
        return j1 / 3, j1 / 3
    return j1 / 3 - 1.5 * a1 / a0, j1 / 3 + 3 * a1 / a0


# ==================== ROOT SOLVERS ====================

@dataclass(frozen=True)
class RealRoots:
    """Distinct real roots in ascending order with their multiplicities."""

    roots: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    case: str

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def total(self) -> int:
        return sum(self.multiplicities)


@dataclass(frozen=True)
class CubicRealRoots(RealRoots):
    b0: float = 0.0
    b1: float = 0.0
    discriminant: float = 0.0


@dataclass(frozen=True)
class QuarticRealRoots(RealRoots):
    resolvent_root: float = 0.0
    tau: float = 0.0


def _root_scale(coefficients: Sequence[float]) -> float:
    """Magnitude bound for the roots of a monic polynomial."""
    # coefficients run from the t^(n-1) term down to the constant
    bounds = [abs(value) ** (1.0 / (i + 1)) for i, value in enumerate(coefficients)]
    return max([1.0] + bounds)


def _horner(coefficients: Sequence[float], x: float) -> Tuple[float, float]:
    """Value and derivative of the monic polynomial with the given lower coefficients."""
    value, slope = 1.0, 0.0
    for coefficient in coefficients:
        slope = slope * x + value
        value = value * x + coefficient
    return value, slope


def polish_root(coefficients: Sequence[float], x: float, steps: int = NEWTON_STEPS) -> float:
    """Newton steps on the monic polynomial, kept only while they shrink the residual."""
    value, slope = _horner(coefficients, x)
    for _ in range(steps):
        if slope == 0.0 or not math.isfinite(slope):
            break
        candidate = x - value / slope
        candidate_value, candidate_slope = _horner(coefficients, candidate)
        if abs(candidate_value) >= abs(value):
            break
        x, value, slope = candidate, candidate_value, candidate_slope
    return x


def _cluster(values: Iterable[Tuple[float, int]], width: float,
             relative: bool = False) -> Tuple[Tuple[float, ...], Tuple[int, ...]]:
    """Merge sorted values closer than ``width`` (times their magnitude when ``relative``)."""
    roots: List[float] = []
    counts: List[int] = []
    for value, count in sorted(values):
        gap = width * max(abs(value), abs(roots[-1])) if relative and roots else width
        if roots and value - roots[-1] <= gap:
            total = counts[-1] + count
            roots[-1] = (roots[-1] * counts[-1] + value * count) / total
            counts[-1] = total
        else:
            roots.append(value)
            counts.append(count)
    return tuple(roots), tuple(counts)


def cubic_real_roots(a2: float, a1: float, a0: float, tol: float = DEFAULT_TOLERANCE) -> CubicRealRoots:
    """
    Real roots of t³ + a2 t² + a1 t + a0 = 0.

    The cubic is depressed with ρ = t + a2/3 to ρ³ + b0 ρ + b1 = 0 and solved
    in closed form, keyed on the sign of δ = 4b0³ + 27b1² and of b0.
    Roots closer than ``tol`` times the root scale count as repeated.

    Returns:
        CubicRealRoots with the distinct roots ascending.
    """
    coefficients = (a2, a1, a0)
    if not all(math.isfinite(value) for value in coefficients):
        raise ValueError(f"non-finite cubic coefficients {coefficients}")

    shift = a2 / 3
    b0 = a1 - a2 * a2 / 3
    b1 = 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0
    delta = 4 * b0 ** 3 + 27 * b1 ** 2
    s = _root_scale(coefficients)

    if abs(b0) <= tol * s * s:
        rho = [(float(np.cbrt(-b1)), 1)]
        if abs(b1) <= tol * s ** 3:
            rho, case = [(rho[0][0], 3)], 'triple'
        else:
            case = 'cube_root'
    elif abs(delta) <= tol * tol * (4 * abs(b0) ** 3 + 27 * b1 * b1):
        rho = [(3 * b1 / b0, 1), (-1.5 * b1 / b0, 2)]
        case = 'simple_and_double'
    elif delta < 0:
        # b0 < 0 here: δ < 0 is impossible otherwise
        modulus = 2 * math.sqrt(-b0 / 3)
        cosine = 1.5 * b1 / b0 * math.sqrt(-3 / b0)
        angle = math.acos(min(1.0, max(-1.0, cosine))) / 3
        rho = [(modulus * math.cos(angle - 2 * math.pi * j / 3), 1) for j in range(3)]
        case = 'three_distinct'
    elif b0 < 0:
        argument = -1.5 * abs(b1) / b0 * math.sqrt(-3 / b0)
        sign = 1.0 if b1 >= 0 else -1.0
        rho = [(-2 * sign * math.sqrt(-b0 / 3) * math.cosh(math.acosh(max(1.0, argument)) / 3), 1)]
        case = 'one_real'
    else:
        argument = 1.5 * b1 / b0 * math.sqrt(3 / b0)
        rho = [(-2 * math.sqrt(b0 / 3) * math.sinh(math.asinh(argument) / 3), 1)]
        case = 'one_real'

    candidates = []
    for value, count in rho:
        t = value - shift
        if count == 1:
            t = polish_root(coefficients, t)
        candidates.append((t, count))

    roots, multiplicities = _cluster(candidates, 0.0)
    return CubicRealRoots(
        roots=roots, multiplicities=multiplicities, case=case,
        b0=b0, b1=b1, discriminant=delta,
    )


def _split_pair(mid: float, offset: float, product: float) -> Tuple[float, float]:
    """
    ``(mid − offset, mid + offset)`` given their product. The member that
    would cancel is recovered from the product instead.
    """
    if offset == 0.0:
        return mid, mid
    if mid * offset >= 0:
        large = mid + offset
        return (product / large if large else mid - offset), large
    large = mid - offset
    return large, (product / large if large else mid + offset)


def _quadratic_real_roots(alpha: float, beta: float, tol: float) -> List[Tuple[float, int]]:
    """Real roots of t² + αt + β; a discriminant within tol of zero gives one double root."""
    size = max(abs(alpha), math.sqrt(abs(beta)))
    discriminant = alpha * alpha - 4 * beta
    band = (tol * size) ** 2
    if discriminant < -band:
        return []
    if discriminant <= band:
        return [(-alpha / 2, 2)]
    root = -(alpha + math.copysign(math.sqrt(discriminant), alpha)) / 2
    return [(root, 1), (beta / root, 1)]


def quartic_real_roots(a3: float, a2: float, a1: float, a0: float,
                       tol: float = DEFAULT_TOLERANCE) -> QuarticRealRoots:
    """
    Real roots of t⁴ + a3 t³ + a2 t² + a1 t + a0 = 0.

    Factors the quartic through the largest real root y1 of the resolvent
    cubic

        y³ − a2 y² + (a1 a3 − 4 a0) y − (a1² + a0 a3² − 4 a0 a2) = 0

    as (t² + a3/2·t + y1/2)² − (τt + κ)², i.e. the two quadratics
    t² + (a3/2 ∓ τ)t + (y1/2 ∓ κ). The smaller coefficient of each pair is
    taken from the pair's product (a2 − y1 and a0), so roots much smaller
    than the rest survive. A quadratic whose discriminant is within ``tol``
    of zero relative to its own roots gives one root of multiplicity two
    instead of a spurious complex pair.

    Raises:
        ResolventFailure: when the resolvent has no real root.
    """
    coefficients = (a3, a2, a1, a0)
    if not all(math.isfinite(value) for value in coefficients):
        raise ValueError(f"non-finite quartic coefficients {coefficients}")

    resolvent = cubic_real_roots(-a2, a1 * a3 - 4 * a0, -(a1 * a1 + a0 * a3 * a3 - 4 * a0 * a2), tol)
    if not resolvent.roots or not all(math.isfinite(value) for value in resolvent.roots):
        raise ResolventFailure(f"resolvent cubic has no real root for {coefficients}")
    y1 = max(resolvent.roots)

    tau_sq = a3 * a3 / 4 - a2 + y1
    kappa_sq = y1 * y1 / 4 - a0
    cross = a3 * y1 / 2 - a1
    # τ below tol·|a3/2| counts as zero
    tau = math.sqrt(tau_sq) if tau_sq > (tol * a3 / 2) ** 2 else 0.0
    # 2τκ = cross: the smaller of τ and κ comes from the larger
    if tau > 0.0 and tau_sq >= abs(kappa_sq):
        kappa = cross / (2 * tau)
    else:
        kappa = math.copysign(math.sqrt(max(kappa_sq, 0.0)), cross)

    alphas = _split_pair(a3 / 2, tau, a2 - y1)
    betas = _split_pair(y1 / 2, kappa, a0)

    candidates = []
    for alpha, beta in zip(alphas, betas):
        for value, count in _quadratic_real_roots(alpha, beta, tol):
            if count == 1:
                value = polish_root(coefficients, value)
            candidates.append((value, count))

    roots, multiplicities = _cluster(candidates, tol, relative=True)
    total = sum(multiplicities)
    case = {4: 'four_real', 2: 'two_real', 0: 'no_real'}.get(total, f'{total}_real')
    return QuarticRealRoots(
        roots=roots, multiplicities=multiplicities, case=case,
        resolvent_root=y1, tau=tau,
    )


def companion_real_roots(coefficients: Sequence[float], tol: float = DEFAULT_TOLERANCE) -> RealRoots:
    """
    Real roots of the monic polynomial with the given lower coefficients,
    from the eigenvalues of its companion matrix, each Newton-polished.
    """
    eigenvalues = np.roots(np.concatenate([[1.0], np.asarray(coefficients, dtype=float)]))
    floor = np.finfo(float).eps * _root_scale(coefficients)
    candidates = [
        (polish_root(coefficients, float(value.real)), 1)
        for value in eigenvalues
        if abs(value.imag) <= tol * abs(value) + floor
    ]
    roots, multiplicities = _cluster(candidates, tol, relative=True)
    return RealRoots(roots=roots, multiplicities=multiplicities, case='companion')
