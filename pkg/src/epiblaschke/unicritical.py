"""The normalized unicritical family B_w(z) = ((z - w) / (1 - conj(w) z))^d.

Its parabolic parameters trace the epicycloid

    gamma_d(theta) = (e^{i d theta} - d e^{i theta}) / (d + 1),

with Denjoy-Wolff point e^{i d theta}.  ``theta`` is always the curve
parameter, never the argument of the curve point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .blaschke import (
    AMBIGUOUS,
    KIND_CODES,
    DynamicsClass,
    DynamicsKind,
    FiniteBlaschkeProduct,
    classify_dynamics,
    classify_dynamics_many,
)
from .config import DEFAULT, Tolerances
from .errors import (
    AmbiguousClassification,
    DomainError,
    ExcludedPoint,
    InconsistentClassification,
)
from .polyline import ClosedPolyline

TWO_PI = 2 * math.pi
POLYLINE_SAMPLES = 2**17


def _check_degree(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"degree must be an integer >= 2, got {d!r}")


@dataclass(frozen=True)
class Epicycloid:
    """Small circle of radius ``r`` rolling on a circle of radius ``k r``."""

    r: float
    k: int

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError("epicycloid radius must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("epicycloid ratio must be a positive integer")

    def point(self, theta: float) -> complex:
        return epicycloid_point(self, theta)

    def derivative(self, theta: float) -> complex:
        k1 = self.k + 1
        return 1j * self.r * k1 * (cmath.exp(1j * k1 * theta) - cmath.exp(1j * theta))

    def cusp_angles(self) -> list:
        return [TWO_PI * j / self.k for j in range(self.k)]


def epicycloid_point(E: Epicycloid, theta: float) -> complex:
    k1 = E.k + 1
    return E.r * (cmath.exp(1j * k1 * theta) - k1 * cmath.exp(1j * theta))


@dataclass(frozen=True)
class UnicriticalParameter:
    d: int
    w: complex

    def __post_init__(self):
        _check_degree(self.d)
        if not abs(self.w) < 1:
            raise DomainError("parameter must lie in the open unit disk")

    def product(self) -> FiniteBlaschkeProduct:
        return FiniteBlaschkeProduct.unicritical(self.d, self.w)


def gamma_d_point(d: int, theta: float) -> complex:
    _check_degree(d)
    return (cmath.exp(1j * d * theta) - d * cmath.exp(1j * theta)) / (d + 1)


def gamma_d_derivative(d: int, theta: float) -> complex:
    return 1j * d * (cmath.exp(1j * d * theta) - cmath.exp(1j * theta)) / (d + 1)


def _gamma_d_second(d: int, theta: float) -> complex:
    return d * (cmath.exp(1j * theta) - d * cmath.exp(1j * d * theta)) / (d + 1)


def gamma_d_points(d: int, thetas: np.ndarray) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    return (np.exp(1j * d * thetas) - d * np.exp(1j * thetas)) / (d + 1)


def cusps(d: int) -> list:
    """Parameters of the d - 1 cusps of gamma_d."""
    _check_degree(d)
    return [TWO_PI * j / (d - 1) for j in range(d - 1)]


def is_excluded(d: int, theta: float, atol: float = 1e-10) -> bool:
    """True where gamma_d touches the unit circle, (d - 1) theta = pi mod 2 pi."""
    x = math.remainder((d - 1) * theta - math.pi, TWO_PI)
    return abs(x) <= atol


def parabolic_parameter(d: int, theta: float) -> tuple:
    """The parabolic parameter gamma_d(theta) and its Denjoy-Wolff point e^{i d theta}."""
    _check_degree(d)
    if is_excluded(d, theta):
        raise ExcludedPoint(f"theta={theta!r} gives |w| = 1 for d={d}")
    return gamma_d_point(d, theta), cmath.exp(1j * d * theta)


def sector_reduce(d: int, w: complex) -> tuple:
    """Rotate w by a multiple of 2 pi / (d - 1) into the fundamental sector."""
    _check_degree(d)
    w = complex(w)
    if w == 0 or d == 2:
        return w, 0
    width = TWO_PI / (d - 1)
    a = cmath.phase(w) % TWO_PI
    j = min(int(a // width), d - 2)
    phi = max(a - j * width, 0.0)
    if phi >= width:
        phi -= width
        j = (j + 1) % (d - 1)
    return abs(w) * cmath.exp(1j * phi), j


def rotate_sector(d: int, w: complex, j: int) -> complex:
    """The rotation R_j through 2 pi j / (d - 1)."""
    return complex(w) * cmath.exp(1j * TWO_PI * j / (d - 1))


class Region(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


REGION_CODES = {Region.INSIDE: 0, Region.OUTSIDE: 1, Region.BOUNDARY: 2}
EXPECTED_KIND = {
    Region.INSIDE: DynamicsKind.ELLIPTIC,
    Region.OUTSIDE: DynamicsKind.HYPERBOLIC,
    Region.BOUNDARY: DynamicsKind.PARABOLIC,
}


@dataclass(frozen=True)
class MembershipResult:
    region: Region
    boundary_theta: Optional[float] = None
    distance: float = math.nan

    def as_dict(self) -> dict:
        return {"region": self.region.value, "boundary_theta": self.boundary_theta}


@lru_cache(maxsize=32)
def gamma_polyline(d: int, samples: int = POLYLINE_SAMPLES) -> ClosedPolyline:
    _check_degree(d)
    thetas = TWO_PI * np.arange(samples) / samples
    return ClosedPolyline(gamma_d_points(d, thetas), thetas)


def _refine_theta(d: int, w: complex, theta: float) -> float:
    """Newton steps on |gamma_d(theta) - w|^2 from a polyline estimate."""
    best = abs(gamma_d_point(d, theta) - w)
    for _ in range(8):
        g = gamma_d_point(d, theta) - w
        g1 = gamma_d_derivative(d, theta)
        g2 = _gamma_d_second(d, theta)
        f1 = (g.conjugate() * g1).real
        f2 = abs(g1) ** 2 + (g.conjugate() * g2).real
        if f2 <= 0:
            break
        cand = theta - f1 / f2
        dist = abs(gamma_d_point(d, cand) - w)
        if dist >= best:
            break
        theta, best = cand, dist
    return theta % TWO_PI


def membership_many(
    d: int, ws, band: float, samples: int = POLYLINE_SAMPLES, exact_distance: bool = False
) -> tuple:
    """Vectorised membership: ``(region codes, polyline distance, theta)``.

    Unless ``exact_distance`` is set, distances beyond the band are reported
    as ``inf``.
    """
    poly = gamma_polyline(d, samples)
    ws = np.asarray(ws, dtype=complex)
    dist, theta = poly.nearest(ws, upper=None if exact_distance else band)
    wind = poly.winding(ws)
    codes = np.where(wind != 0, REGION_CODES[Region.INSIDE], REGION_CODES[Region.OUTSIDE])
    codes = np.where(dist < band, REGION_CODES[Region.BOUNDARY], codes).astype(np.int8)
    return codes, dist, theta


def epicycloid_membership(
    d: int, w: complex, band: Optional[float] = None, *, samples: int = POLYLINE_SAMPLES
) -> MembershipResult:
    """Inside / on / outside the region bounded by gamma_d.

    Inside is decided by the winding number of the sampled curve about w, and
    Boundary by Euclidean distance to the polyline below ``band``.
    """
    _check_degree(d)
    w = complex(w)
    if not abs(w) < 1:
        raise DomainError("parameter must lie in the open unit disk")
    band = DEFAULT.band if band is None else band
    codes, dist, theta = membership_many(d, np.array([w]), band, samples, exact_distance=True)
    code = int(codes[0])
    if code == REGION_CODES[Region.BOUNDARY]:
        return MembershipResult(Region.BOUNDARY, _refine_theta(d, w, float(theta[0])), float(dist[0]))
    region = Region.INSIDE if code == REGION_CODES[Region.INSIDE] else Region.OUTSIDE
    return MembershipResult(region, None, float(dist[0]))


def boundary_multiplier(d: int, w: complex, z0: complex) -> float:
    """d (1 - |w|^2) / |1 - conj(w) z0|^2, the multiplier of B_w at a circle fixed point."""
    if abs(abs(z0) - 1) > 1e-8:
        raise DomainError("z0 must lie on the unit circle")
    w = complex(w)
    return d * (1 - abs(w) ** 2) / abs(1 - w.conjugate() * z0) ** 2


def classify_unicritical(d: int, w: complex, tol: Tolerances = DEFAULT) -> DynamicsClass:
    """Dynamics of B_w, cross-checked against the epicycloid.

    Inside the band around gamma_d the answer is Parabolic: the Denjoy-Wolff
    point is taken as e^{i d theta} at the nearest curve parameter unless the
    fixed-point analysis already located a parabolic point.  Away from the
    band the dynamic and geometric answers must agree.
    """
    param = UnicriticalParameter(d, complex(w))
    mem = epicycloid_membership(d, param.w, tol.band)
    B = param.product()
    try:
        dyn = classify_dynamics(B, tol)
    except AmbiguousClassification:
        if mem.region is not Region.BOUNDARY:
            raise
        dyn = None
    if mem.region is Region.BOUNDARY:
        if dyn is not None and dyn.kind is DynamicsKind.PARABOLIC:
            return dyn
        z0 = cmath.exp(1j * d * mem.boundary_theta)
        return DynamicsClass(DynamicsKind.PARABOLIC, z0, complex(boundary_multiplier(d, param.w, z0)))
    if dyn.kind is not EXPECTED_KIND[mem.region]:
        raise InconsistentClassification(
            f"d={d}, w={param.w!r}: dynamics say {dyn.kind.value}, "
            f"the epicycloid says {mem.region.value}"
        )
    return dyn


def classify_unicritical_many(
    d: int, ws, tol: Tolerances = DEFAULT, band: Optional[float] = None
) -> tuple:
    """Membership and dynamics for many parameters.

    Returns ``(region_codes, kind_codes)``.  Dynamics are skipped (code
    ``AMBIGUOUS``) inside the band; agreement is left to the caller.
    """
    _check_degree(d)
    ws = np.asarray(ws, dtype=complex).ravel()
    band = tol.raster_band if band is None else band
    regions, _, _ = membership_many(d, ws, band)
    kinds = np.full(len(ws), AMBIGUOUS, dtype=np.int8)
    todo = np.flatnonzero(regions != REGION_CODES[Region.BOUNDARY])
    if len(todo):
        zeros = np.repeat(ws[todo, None], d, axis=1)
        kinds[todo] = classify_dynamics_many(zeros, 0.0, tol)[0]
    return regions, kinds


def consistent(regions: np.ndarray, kinds: np.ndarray) -> np.ndarray:
    """Cell-wise agreement of membership and dynamics (band cells count as agreeing)."""
    expect = np.full(regions.shape, AMBIGUOUS, dtype=np.int8)
    expect[regions == REGION_CODES[Region.INSIDE]] = KIND_CODES[DynamicsKind.ELLIPTIC]
    expect[regions == REGION_CODES[Region.OUTSIDE]] = KIND_CODES[DynamicsKind.HYPERBOLIC]
    return (regions == REGION_CODES[Region.BOUNDARY]) | (expect == kinds)
