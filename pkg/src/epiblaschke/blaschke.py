"""Finite Blaschke products: evaluation, fixed points and Denjoy-Wolff data."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .core import POLE_TOL, format_complex
from .errors import (
    AmbiguousClassification,
    DomainError,
    NoRepellingFixedPoint,
    PoleError,
)
from .roots import CLUSTER_RTOL, ComplexPolynomial, poly_mul, poly_roots, poly_roots_batch

TWO_PI = 2 * math.pi
# |B(z) - z| below which a polynomial root counts as a fixed point
FIXED_RESIDUAL = 1e-8


@dataclass(frozen=True)
class FiniteBlaschkeProduct:
    """``e^{i phase} * prod (z - w) / (1 - conj(w) z)`` over ``zeros``."""

    zeros: tuple
    phase: float = 0.0

    def __init__(self, zeros: Sequence[complex], phase: float = 0.0):
        zs = tuple(complex(w) for w in zeros)
        if not zs:
            raise DomainError("a Blaschke product needs at least one zero")
        for w in zs:
            if not abs(w) < 1:
                raise DomainError(f"zero {w!r} is not inside the unit disk")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "phase", math.fmod(phase, TWO_PI) % TWO_PI)

    @classmethod
    def unicritical(cls, d: int, w: complex) -> "FiniteBlaschkeProduct":
        return cls([w] * d)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_unicritical_form(self) -> bool:
        return all(w == self.zeros[0] for w in self.zeros)

    def __call__(self, z: complex) -> complex:
        return blaschke_eval(self, z)


class DynamicsKind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


KIND_CODES = {DynamicsKind.ELLIPTIC: 0, DynamicsKind.HYPERBOLIC: 1, DynamicsKind.PARABOLIC: 2}
KIND_FROM_CODE = {v: k for k, v in KIND_CODES.items()}
AMBIGUOUS = -1


@dataclass(frozen=True)
class DynamicsClass:
    kind: DynamicsKind
    dw_point: complex
    multiplier: complex

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "dw_point": format_complex(self.dw_point),
            "multiplier": format_complex(self.multiplier),
        }


class JuliaKind(str, enum.Enum):
    WHOLE_CIRCLE = "whole-circle"
    CANTOR = "cantor"


@dataclass(frozen=True)
class JuliaClass:
    kind: JuliaKind
    second_derivative_at_dw: Optional[complex] = None

    def as_dict(self) -> dict:
        sd = self.second_derivative_at_dw
        return {
            "julia": self.kind.value,
            "second_derivative": None if sd is None else format_complex(sd),
        }


def _jets(B: FiniteBlaschkeProduct, z: complex):
    """B, B' and B'' at z, accumulated factor by factor by the product rule."""
    p = cmath.exp(1j * B.phase)
    p1 = 0j
    p2 = 0j
    for w in B.zeros:
        wc = w.conjugate()
        q = 1 - wc * z
        if abs(q) <= POLE_TOL:
            raise PoleError(f"{z!r} is a pole of the Blaschke product")
        f = (z - w) / q
        f1 = (1 - abs(w) ** 2) / (q * q)
        f2 = 2 * wc * f1 / q
        p, p1, p2 = p * f, p1 * f + p * f1, p2 * f + 2 * p1 * f1 + p * f2
    return p, p1, p2


def blaschke_eval(B: FiniteBlaschkeProduct, z: complex) -> complex:
    return _jets(B, z)[0]


def blaschke_derivative(B: FiniteBlaschkeProduct, z: complex, order: int = 1) -> complex:
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    return _jets(B, z)[order]


def fixed_point_polynomial(B: FiniteBlaschkeProduct) -> ComplexPolynomial:
    """``z prod(1 - conj(w) z) - e^{it} prod(z - w)``; its roots solve B(z) = z."""
    den = [1 + 0j]
    num = [cmath.exp(1j * B.phase)]
    for w in B.zeros:
        den = poly_mul(den, [1, -w.conjugate()])
        num = poly_mul(num, [-w, 1])
    lhs = [0j] + den
    num += [0j] * (len(lhs) - len(num))
    return ComplexPolynomial([a - b for a, b in zip(lhs, num)])


def blaschke_fixed_points(B: FiniteBlaschkeProduct, tol: Tolerances = DEFAULT) -> list:
    """Fixed points in the closed disk, with multiplicity, paired with B'."""
    if B.degree < 2:
        raise DomainError("fixed-point analysis needs degree >= 2")
    out = []
    for z in poly_roots(fixed_point_polynomial(B)):
        if abs(z) <= 1 + tol.boundary:
            try:
                b, b1, _ = _jets(B, z)
            except PoleError:
                continue
            # near |w| = 1 the polynomial has a badly conditioned cluster at
            # the zeros; its members are not fixed points of B
            if abs(b - z) <= FIXED_RESIDUAL:
                out.append((z, b1))
    return out


def _distinct(points, atol=1e-9):
    out = []
    for z, m in points:
        if all(abs(z - y) > atol for y, _ in out):
            out.append((z, m))
    return out


def _select(fixed, tol: Tolerances) -> DynamicsClass:
    interior = _distinct(
        [(z, m) for z, m in fixed if abs(z) < 1 - tol.boundary and abs(m) < 1]
    )
    if len(interior) == 1:
        z, m = interior[0]
        return DynamicsClass(DynamicsKind.ELLIPTIC, z, m)
    if interior:
        raise AmbiguousClassification(f"{len(interior)} attracting interior fixed points")
    boundary = _distinct(
        [
            (z, m)
            for z, m in fixed
            if abs(abs(z) - 1) <= tol.boundary
            and abs(m.imag) <= tol.multiplier_imag
            and m.real <= 1 + tol.parabolic
        ]
    )
    if len(boundary) != 1:
        raise AmbiguousClassification(
            f"expected one non-repelling boundary fixed point, found {len(boundary)}"
        )
    z, m = boundary[0]
    if abs(m - 1) <= tol.parabolic:
        return DynamicsClass(DynamicsKind.PARABOLIC, z, m)
    if 0 < m.real < 1:
        return DynamicsClass(DynamicsKind.HYPERBOLIC, z, m)
    raise AmbiguousClassification(f"boundary multiplier {m!r} outside (0, 1]")


def _validate_orbit(B: FiniteBlaschkeProduct, dc: DynamicsClass, fixed, tol: Tolerances):
    z0 = dc.dw_point
    z = 0j
    for _ in range(tol.validation_steps):
        if abs(z - z0) < tol.validation_radius:
            return
        z = blaschke_eval(B, z)
    # slow (parabolic-like) convergence: accept if the orbit heads to z0
    nearest = min((p for p, _ in fixed), key=lambda p: abs(p - z))
    if abs(nearest - z0) > 1e-9:
        raise AmbiguousClassification(
            f"forward orbit of 0 approaches {nearest!r}, not the candidate {z0!r}"
        )


def classify_dynamics(B: FiniteBlaschkeProduct, tol: Tolerances = DEFAULT) -> DynamicsClass:
    """Elliptic / hyperbolic / parabolic classification with its Denjoy-Wolff point."""
    fixed = blaschke_fixed_points(B, tol)
    dc = _select(fixed, tol)
    _validate_orbit(B, dc, fixed, tol)
    return dc


def julia_classify(B: FiniteBlaschkeProduct, tol: Tolerances = DEFAULT) -> JuliaClass:
    dc = classify_dynamics(B, tol)
    if dc.kind is DynamicsKind.ELLIPTIC:
        return JuliaClass(JuliaKind.WHOLE_CIRCLE)
    if dc.kind is DynamicsKind.HYPERBOLIC:
        return JuliaClass(JuliaKind.CANTOR)
    b2 = blaschke_derivative(B, dc.dw_point, 2)
    kind = JuliaKind.WHOLE_CIRCLE if abs(b2) < tol.second_derivative else JuliaKind.CANTOR
    return JuliaClass(kind, b2)


def inverse_images(B: FiniteBlaschkeProduct, target: complex) -> list:
    """The ``degree`` solutions of B(z) = target, with multiplicity."""
    target = complex(target)
    if abs(target) > 1 + 1e-12:
        raise DomainError("inverse images are only taken for |target| <= 1")
    d = B.degree
    if B.is_unicritical_form:
        w = B.zeros[0]
        s = target * cmath.exp(-1j * B.phase)
        if s == 0:
            return [w] * d
        root = abs(s) ** (1.0 / d) * cmath.exp(1j * cmath.phase(s) / d)
        out = []
        for j in range(d):
            rho = root * cmath.exp(2j * math.pi * j / d)
            out.append((rho + w) / (1 + w.conjugate() * rho))
        return out
    num = [cmath.exp(1j * B.phase)]
    den = [1 + 0j]
    for w in B.zeros:
        num = poly_mul(num, [-w, 1])
        den = poly_mul(den, [1, -w.conjugate()])
    return poly_roots([a - target * b for a, b in zip(num, den)])


def repelling_boundary_fixed_points(B: FiniteBlaschkeProduct, tol: Tolerances = DEFAULT) -> list:
    return [
        (z, m)
        for z, m in _distinct(blaschke_fixed_points(B, tol))
        if abs(abs(z) - 1) <= tol.boundary and m.real > 1 + tol.parabolic
    ]


def julia_sample(
    B: FiniteBlaschkeProduct,
    n: int,
    seed: int,
    *,
    burn_in: int = 100,
    tol: Tolerances = DEFAULT,
) -> list:
    """Seeded random backward orbit on the Julia set.

    Starts at the most repelling boundary fixed point and picks one of the
    ``degree`` preimages uniformly at each step.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if B.degree < 2:
        raise DomainError("Julia sampling needs degree >= 2")
    repelling = repelling_boundary_fixed_points(B, tol)
    if not repelling:
        raise NoRepellingFixedPoint("every boundary fixed point has multiplier <= 1")
    z = max(repelling, key=lambda zm: zm[1].real)[0]
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, B.degree, size=burn_in + n)
    out = []
    for step, k in enumerate(choices):
        z = inverse_images(B, z)[k]
        if step >= burn_in:
            out.append(z)
    return out


# --- vectorised classification ------------------------------------------------


def jets_many(zeros: np.ndarray, z: np.ndarray, phase: float = 0.0):
    """Vectorised B, B', B'' for rows of zeros (N, d) at points z (N, k)."""
    z = np.asarray(z, dtype=complex)
    p = np.full(z.shape, cmath.exp(1j * phase), dtype=complex)
    p1 = np.zeros_like(p)
    p2 = np.zeros_like(p)
    for j in range(zeros.shape[1]):
        w = zeros[:, j : j + 1]
        wc = np.conj(w)
        q = 1 - wc * z
        f = (z - w) / q
        f1 = (1 - np.abs(w) ** 2) / (q * q)
        f2 = 2 * wc * f1 / q
        p, p1, p2 = p * f, p1 * f + p * f1, p2 * f + 2 * p1 * f1 + p * f2
    return p, p1, p2


def eval_many(zeros: np.ndarray, z: np.ndarray, phase: float = 0.0) -> np.ndarray:
    """Vectorised B for rows of zeros (N, d) at points z (N,)."""
    p = np.full(z.shape, cmath.exp(1j * phase), dtype=complex)
    for j in range(zeros.shape[1]):
        w = zeros[:, j]
        p *= (z - w) / (1 - np.conj(w) * z)
    return p


def fixed_point_coeffs_many(zeros: np.ndarray, phase: float = 0.0) -> np.ndarray:
    N, d = zeros.shape
    den = np.ones((N, 1), dtype=complex)
    num = np.full((N, 1), cmath.exp(1j * phase), dtype=complex)
    for j in range(d):
        w = zeros[:, j : j + 1]
        den = np.concatenate([den, np.zeros((N, 1))], axis=1) - np.conj(w) * np.concatenate(
            [np.zeros((N, 1)), den], axis=1
        )
        num = np.concatenate([np.zeros((N, 1)), num], axis=1) - w * np.concatenate(
            [num, np.zeros((N, 1))], axis=1
        )
    lhs = np.concatenate([np.zeros((N, 1)), den], axis=1)
    num = np.concatenate([num, np.zeros((N, 1))], axis=1)
    return lhs - num


def _distinct_rows(roots: np.ndarray) -> np.ndarray:
    """Rows whose roots are pairwise separated beyond the cluster tolerance."""
    az = np.abs(roots)
    n = roots.shape[1]
    diff = np.abs(roots[:, :, None] - roots[:, None, :])
    diff[:, np.arange(n), np.arange(n)] = np.inf
    sc = np.maximum(1.0, np.maximum(az[:, :, None], az[:, None, :]))
    return (diff > CLUSTER_RTOL * sc).all(axis=(1, 2))


def _select_many(zeros: np.ndarray, roots: np.ndarray, phase: float, tol: Tolerances) -> tuple:
    """Vectorised counterpart of the scalar selection and orbit check."""
    az = np.abs(roots)
    with np.errstate(all="ignore"):
        b, m, _ = jets_many(zeros, roots, phase)
        real = np.abs(b - roots) <= FIXED_RESIDUAL
        interior = real & (az < 1 - tol.boundary) & (np.abs(m) < 1)
        bnd = (
            real
            & (np.abs(az - 1) <= tol.boundary)
            & (np.abs(m.imag) <= tol.multiplier_imag)
            & (m.real <= 1 + tol.parabolic)
        )
    n_int = interior.sum(axis=1)
    n_bnd = bnd.sum(axis=1)
    pick = np.where(n_int == 1, interior.argmax(axis=1), bnd.argmax(axis=1))
    rows = np.arange(len(zeros))
    z0 = roots[rows, pick]
    m0 = m[rows, pick]
    c = np.full(len(zeros), AMBIGUOUS, dtype=np.int8)
    c[n_int == 1] = KIND_CODES[DynamicsKind.ELLIPTIC]
    on_circle = (n_int == 0) & (n_bnd == 1)
    para = on_circle & (np.abs(m0 - 1) <= tol.parabolic)
    hyp = on_circle & ~para & (m0.real > 0) & (m0.real < 1)
    c[para] = KIND_CODES[DynamicsKind.PARABOLIC]
    c[hyp] = KIND_CODES[DynamicsKind.HYPERBOLIC]

    # forward orbit of 0 must head to the selected point
    ai = np.flatnonzero(c != AMBIGUOUS)
    z = np.zeros(len(ai), dtype=complex)
    steps = 0
    while len(ai) and steps < tol.validation_steps:
        keep = np.abs(z - z0[ai]) >= tol.validation_radius
        ai, z = ai[keep], z[keep]
        z = eval_many(zeros[ai], z, phase)
        steps += 1
    for k, i in enumerate(ai):
        cand = [r for r, ok in zip(roots[i], real[i]) if ok and abs(r) <= 1 + tol.boundary]
        nearest = min(cand, key=lambda r: abs(r - z[k]))
        if abs(nearest - z0[i]) > 1e-9:
            c[i] = AMBIGUOUS
    return c, z0, m0


def classify_dynamics_many(
    zeros: np.ndarray, phase: float = 0.0, tol: Tolerances = DEFAULT
) -> tuple:
    """Classify many products of one degree at once.

    Returns ``(codes, dw_points, multipliers)``; codes follow ``KIND_CODES``
    with ``AMBIGUOUS`` (-1) where the scalar classifier would raise.
    """
    zeros = np.atleast_2d(np.asarray(zeros, dtype=complex))
    N, d = zeros.shape
    codes = np.full(N, AMBIGUOUS, dtype=np.int8)
    dw = np.full(N, np.nan + 0j)
    mult = np.full(N, np.nan + 0j)
    if N == 0:
        return codes, dw, mult
    coeffs = fixed_point_coeffs_many(zeros, phase)
    scale = np.abs(coeffs).max(axis=1)
    fast = np.abs(coeffs[:, -1]) > 1e-14 * scale
    fi = np.flatnonzero(fast)
    roots, ok = poly_roots_batch(coeffs[fi])
    ok &= _distinct_rows(roots)
    # rows the batch polish left unsure get scalar roots, still checked in bulk
    redo = np.flatnonzero(~ok)
    for i in redo:
        roots[i] = poly_roots(coeffs[fi[i]])
    ok[redo] = _distinct_rows(roots[redo])
    fast[fi[~ok]] = False
    fi, roots = fi[ok], roots[ok]
    c, z0, m0 = _select_many(zeros[fi], roots, phase, tol)
    retry = np.flatnonzero(c == AMBIGUOUS)
    if len(retry):
        again = np.array([poly_roots(coeffs[fi[i]]) for i in retry])
        good = _distinct_rows(again)
        retry, again = retry[good], again[good]
        c2, z2, m2 = _select_many(zeros[fi[retry]], again, phase, tol)
        c[retry], z0[retry], m0[retry] = c2, z2, m2
    codes[fi], dw[fi], mult[fi] = c, z0, m0
    settled = c != AMBIGUOUS
    dw[fi[~settled]] = np.nan
    mult[fi[~settled]] = np.nan

    for i in np.flatnonzero(~fast):
        try:
            res = classify_dynamics(FiniteBlaschkeProduct(zeros[i], phase), tol)
        except AmbiguousClassification:
            continue
        codes[i] = KIND_CODES[res.kind]
        dw[i], mult[i] = res.dw_point, res.multiplier
    return codes, dw, mult
