"""The central hyperbolic component of the Multibrot set for g_c(z) = z^d + c.

Its boundary is the epicycloid c(alpha) = (r_d / d)(d e^{i alpha} - e^{i d alpha})
with r_d = d^{1/(1-d)}, traced by the neutral fixed point z0 = r_d e^{i alpha}.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .config import DEFAULT, Tolerances
from .core import format_complex
from .errors import DomainError
from .polyline import ClosedPolyline
from .raster import BLACK, GRAY, WHITE, ClassificationRaster, Rect, grid
from .roots import poly_roots, poly_roots_batch

TWO_PI = 2 * math.pi
CURVE_SAMPLES = 4096


def _check_degree(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"degree must be an integer >= 2, got {d!r}")


def r_d(d: int) -> float:
    """Modulus of the neutral fixed point, d^{1/(1-d)}."""
    _check_degree(d)
    return d ** (1.0 / (1 - d))


@dataclass(frozen=True)
class MultibrotQuery:
    d: int
    c: complex

    def __post_init__(self):
        _check_degree(self.d)
        object.__setattr__(self, "c", complex(self.c))

    def __call__(self, z: complex) -> complex:
        return z**self.d + self.c


class CentralStatus(str, enum.Enum):
    ATTRACTING = "attracting"
    NEUTRAL = "neutral"
    NONE = "none"


STATUS_CODES = {CentralStatus.ATTRACTING: 0, CentralStatus.NONE: 1, CentralStatus.NEUTRAL: 2}


@dataclass(frozen=True)
class CentralComponentResult:
    status: CentralStatus
    fixed_point: Optional[complex] = None
    multiplier: Optional[complex] = None

    def as_dict(self) -> dict:
        fmt = lambda z: None if z is None else format_complex(z)  # noqa: E731
        return {
            "status": self.status.value,
            "fixed_point": fmt(self.fixed_point),
            "multiplier": fmt(self.multiplier),
        }


def multibrot_boundary_point(d: int, alpha: float) -> complex:
    r = r_d(d)
    return (r / d) * (d * cmath.exp(1j * alpha) - cmath.exp(1j * d * alpha))


def multibrot_boundary_points(d: int, alphas) -> np.ndarray:
    r = r_d(d)
    a = np.asarray(alphas, dtype=float)
    return (r / d) * (d * np.exp(1j * a) - np.exp(1j * d * a))


def neutral_fixed_point(d: int, alpha: float) -> complex:
    return r_d(d) * cmath.exp(1j * alpha)


def _fixed_point_coeffs(d: int, c: complex) -> list:
    # z^d - z + c, ascending
    coeffs = [0j] * (d + 1)
    coeffs[0] = complex(c)
    coeffs[1] = -1.0
    coeffs[d] = 1.0
    return coeffs


def _status(m: float, tol: Tolerances) -> CentralStatus:
    if m < 1 - tol.neutral:
        return CentralStatus.ATTRACTING
    if abs(m - 1) <= tol.neutral:
        return CentralStatus.NEUTRAL
    return CentralStatus.NONE


def multibrot_central_classify(d: int, c: complex, tol: Tolerances = DEFAULT) -> CentralComponentResult:
    """Attracting, Neutral or None according to the fixed point of smallest multiplier."""
    q = MultibrotQuery(d, c)
    roots = poly_roots(_fixed_point_coeffs(q.d, q.c))
    mults = [q.d * z ** (q.d - 1) for z in roots]
    k = min(range(len(roots)), key=lambda i: abs(mults[i]))
    status = _status(abs(mults[k]), tol)
    if status is CentralStatus.NONE:
        return CentralComponentResult(status)
    return CentralComponentResult(status, roots[k], mults[k])


def central_classify_many(d: int, cs, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Status codes (see ``STATUS_CODES``) for an array of parameters."""
    _check_degree(d)
    cs = np.asarray(cs, dtype=complex)
    flat = cs.ravel()
    coeffs = np.zeros((len(flat), d + 1), dtype=complex)
    coeffs[:, 0] = flat
    coeffs[:, 1] = -1.0
    coeffs[:, d] = 1.0
    roots, ok = poly_roots_batch(coeffs)
    m = np.abs(d * roots ** (d - 1)).min(axis=1)
    codes = np.full(len(flat), STATUS_CODES[CentralStatus.NONE], dtype=np.int8)
    codes[m < 1 - tol.neutral] = STATUS_CODES[CentralStatus.ATTRACTING]
    codes[np.abs(m - 1) <= tol.neutral] = STATUS_CODES[CentralStatus.NEUTRAL]
    for i in np.flatnonzero(~ok):
        codes[i] = STATUS_CODES[multibrot_central_classify(d, complex(flat[i]), tol).status]
    return codes.reshape(cs.shape)


def boundary_curve(d: int, samples: int = CURVE_SAMPLES) -> tuple:
    alphas = TWO_PI * np.arange(samples) / samples
    return alphas, multibrot_boundary_points(d, alphas)


def default_region(d: int) -> Rect:
    """The classical cardioid window for d = 2, else a square around the curve."""
    _check_degree(d)
    if d == 2:
        return Rect(-1.0, 0.5, -0.75, 0.75)
    R = 1.1 * r_d(d) * (d + 1) / d
    return Rect(-R, R, -R, R)


PALETTE = {
    STATUS_CODES[CentralStatus.ATTRACTING]: WHITE,
    STATUS_CODES[CentralStatus.NEUTRAL]: BLACK,
    STATUS_CODES[CentralStatus.NONE]: GRAY,
}


def multibrot_component_raster(
    d: int, region: Optional[Rect] = None, resolution: int = 400, tol: Tolerances = DEFAULT
) -> ClassificationRaster:
    """Per-pixel central-component status with the analytic boundary overlaid."""
    _check_degree(d)
    if resolution < 16:
        raise DomainError("resolution must be at least 16")
    region = default_region(d) if region is None else region
    cells = central_classify_many(d, grid(region, resolution, resolution), tol)
    raster = ClassificationRaster(
        region, resolution, resolution, cells,
        legend={v: k.value for k, v in STATUS_CODES.items()},
    )
    _, curve = boundary_curve(d)
    raster.add_overlay(np.append(curve, curve[:1]))
    return raster


def curve_agreement(raster: ClassificationRaster, d: int) -> tuple:
    """Agreement of Attracting pixels with the curve interior, off a one-pixel band.

    Returns ``(rate, compared_pixel_count)``.
    """
    alphas, curve = boundary_curve(d, 2**14)
    poly = ClosedPolyline(curve, alphas)
    pts = raster.points()
    pixel = max(raster.pixel_size())
    dist, _ = poly.nearest(pts.ravel(), upper=pixel)
    band = (dist < pixel).reshape(pts.shape)
    inside = poly.winding(pts) != 0
    attracting = raster.cells == STATUS_CODES[CentralStatus.ATTRACTING]
    keep = ~band
    return float(np.mean(inside[keep] == attracting[keep])), int(keep.sum())


def write_boundary_csv(path, d: int, samples: int = CURVE_SAMPLES) -> None:
    alphas, curve = boundary_curve(d, samples)
    with open(Path(path), "w", newline="") as fh:
        fh.write("alpha,re,im\n")
        for a, c in zip(alphas, curve):
            fh.write(f"{a:.17g},{c.real:.17g},{c.imag:.17g}\n")
