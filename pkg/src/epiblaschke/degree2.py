"""Degree-2 Blaschke products B(z) = (z - u)(z - w) / ((1 - conj(u) z)(1 - conj(w) z)).

The critical point c is the hyperbolic midpoint of the zeros.  With
p(z) = (z - c) / (1 - conj(c) z) the product is conjugate to
B_lam(z) = ((z - lam) / (1 - conj(lam) z))^2, and lam classifies the dynamics
through the cardioid gamma_2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .blaschke import (
    DynamicsClass,
    DynamicsKind,
    FiniteBlaschkeProduct,
    classify_dynamics,
)
from .config import DEFAULT, Tolerances
from .core import MoebiusMap, disk_automorphism, format_complex
from .errors import (
    AmbiguousClassification,
    DegenerateError,
    DomainError,
    InconsistentClassification,
    PoleError,
)
from .unicritical import (
    EXPECTED_KIND,
    Region,
    boundary_multiplier,
    classify_unicritical,
    epicycloid_membership,
)

SIDE_TOL = 1e-12
MU_TOL = 1e-14
RESIDUAL_SAMPLES = 50


def _disk(z, name: str) -> complex:
    z = complex(z)
    if not abs(z) < 1:
        raise DomainError(f"{name} must lie in the open unit disk, got {z!r}")
    return z


@dataclass(frozen=True)
class Degree2Product:
    u: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "u", _disk(self.u, "u"))
        object.__setattr__(self, "w", _disk(self.w, "w"))

    def __call__(self, z: complex) -> complex:
        u, w = self.u, self.w
        return (z - u) * (z - w) / ((1 - u.conjugate() * z) * (1 - w.conjugate() * z))

    def blaschke(self) -> FiniteBlaschkeProduct:
        return FiniteBlaschkeProduct([self.u, self.w])


@dataclass(frozen=True)
class LambdaInvariant:
    value: complex


@dataclass(frozen=True)
class ConjugacyWitness:
    map: MoebiusMap
    lam: LambdaInvariant
    residual: float


def _critical(u: complex, w: complex) -> complex:
    s = w + u
    P = w * u
    if s == 0:
        return 0j
    root = math.sqrt((1 - abs(w) ** 2) * (1 - abs(u) ** 2)) * abs(1 - w * u.conjugate())
    # the root of smaller modulus, rationalised so that nothing cancels
    return (P * s.conjugate() - s) / (abs(P) ** 2 - 1 - root)


def critical_point(u: complex, w: complex) -> complex:
    """The critical point of B in the disk, i.e. the hyperbolic midpoint of u and w."""
    return _critical(_disk(u, "u"), _disk(w, "w"))


def critical_quadratic(u: complex, w: complex) -> tuple:
    """Coefficients (a2, a1, a0) of the quadratic satisfied by the critical points."""
    s, P = w + u, w * u
    return (P.conjugate() * s - s.conjugate(), 2 * (1 - abs(P) ** 2), P * s.conjugate() - s)


def _p(c: complex, z: complex) -> complex:
    return (z - c) / (1 - c.conjugate() * z)


def geodesic_side(u: complex, w: complex, z: complex) -> int:
    """Which side of the geodesic through u and w the point z lies on.

    Uses q = e^{i phi} p_c normalised so that q(u) > 0; returns the sign of
    Im q(z), or 0 on the geodesic.
    """
    u, w, z = _disk(u, "u"), _disk(w, "w"), _disk(z, "z")
    if u == w:
        raise DegenerateError("coincident zeros span no unique geodesic")
    c = _critical(u, w)
    pu = _p(c, u)
    q = (pu.conjugate() / abs(pu)) * _p(c, z)
    if abs(q.imag) < SIDE_TOL:
        return 0
    return 1 if q.imag > 0 else -1


def _phase_and_pbc(u: complex, w: complex, c: complex) -> tuple:
    """e^{i psi} and p(B(c)) with lambda = -e^{i psi} p(B(c))."""
    Bc = Degree2Product(u, w)(c)
    cb = c.conjugate()
    psi = 2 * cmath.phase(1 - cb * w) + 2 * cmath.phase(1 - cb * u) + 2 * cmath.phase(1 - c * Bc.conjugate())
    return cmath.exp(1j * psi), (Bc - c) / (1 - cb * Bc)


def _lambda(u: complex, w: complex, c: complex) -> complex:
    rot, pbc = _phase_and_pbc(u, w, c)
    # e^{i pi} folded into the sign
    return -rot * pbc


def lambda_invariant(u: complex, w: complex) -> LambdaInvariant:
    """The conjugacy invariant lambda of the product with zeros u, w."""
    u, w = _disk(u, "u"), _disk(w, "w")
    if u == w:
        return LambdaInvariant(u)
    # sort the zeros so the floating-point result is exactly symmetric
    a, b = sorted((u, w), key=lambda z: (z.real, z.imag))
    return LambdaInvariant(_lambda(a, b, _critical(a, b)))


def b_lambda(lam: complex, z: complex) -> complex:
    lam = complex(lam)
    return ((z - lam) / (1 - lam.conjugate() * z)) ** 2


def _residual_samples() -> np.ndarray:
    k = np.arange(RESIDUAL_SAMPLES)
    golden = math.pi * (3 - math.sqrt(5))
    return 0.95 * np.sqrt((k + 0.5) / RESIDUAL_SAMPLES) * np.exp(1j * golden * k)


def conjugacy_residual(M: MoebiusMap, B: Degree2Product, lam: complex) -> float:
    """max |M(B(z)) - B_lam(M(z))| over fixed sample points of the disk."""
    worst = 0.0
    for z in _residual_samples():
        z = complex(z)
        worst = max(worst, abs(M(B(z)) - b_lambda(lam, M(z))))
    return worst


def conjugator(u: complex, w: complex, tol: Tolerances = DEFAULT) -> ConjugacyWitness:
    """A Moebius map M with M o B o M^{-1} = B_lam, assembled as R o A^{-1} o p."""
    B = Degree2Product(u, w)
    u, w = B.u, B.w
    if u == w:
        M = MoebiusMap.identity()
        return ConjugacyWitness(M, LambdaInvariant(u), conjugacy_residual(M, B, u))
    c = _critical(u, w)
    # e^{i sigma} equals the phase factor of the lambda formula, which stays
    # well conditioned where the closed form for mu is 0/0 (u -> w)
    rot, pbc = _phase_and_pbc(u, w, c)
    mu = -pbc / rot
    p = disk_automorphism(c)
    A = MoebiusMap(rot, -rot * mu, -mu.conjugate(), 1)
    R = MoebiusMap(rot * rot, 0, 0, 1)
    M = R @ A.inverse() @ p
    lam = mu * rot * rot
    res = conjugacy_residual(M, B, lam)
    if not res < tol.residual:
        raise DegenerateError(f"conjugator residual {res:.3g} for u={u!r}, w={w!r}")
    return ConjugacyWitness(M, LambdaInvariant(lam), res)


def mu_closed_form(u: complex, w: complex) -> complex:
    """mu = p(w)^2 p(B(c)) (1 + c conj(p(B(c)))) / (c + p(B(c))), for cross-checks."""
    B = Degree2Product(u, w)
    c = _critical(B.u, B.w)
    pw2 = _p(c, B.w) ** 2
    pbc = _p(c, B(c))
    den = c + pbc
    if abs(den) < MU_TOL:
        raise DegenerateError(f"c + p(B(c)) vanishes for u={B.u!r}, w={B.w!r}")
    return pw2 * pbc * (1 + c * pbc.conjugate()) / den


def lambda_real(u: float, w: float) -> float:
    """Closed form of lambda for real zeros."""
    u, w = float(u), float(w)
    if not (-1 < u < 1 and -1 < w < 1):
        raise DomainError("real zeros must lie in (-1, 1)")
    s = w + u
    return (s - 2 * w * u) / (2 - s)


def f_lambda(lam: float, u: float) -> float:
    """The zero w paired with u on the real conjugacy curve of lam."""
    lam, u = float(lam), float(u)
    den = 2 * u - (1 + lam)
    if den == 0:
        raise PoleError(f"f_lambda has a pole at u = (1 + lambda) / 2 = {u!r}")
    # ((1 + lam) u - 2 lam) / den rearranged so that u = lam returns lam exactly
    return lam + (1 - lam) * (u - lam) / den


def pw_squared_real(u: float, w: float) -> float:
    """p(w)^2 for real zeros via cross-ratio invariance."""
    delta = (1 - w * w) * (1 - u * u)
    r = math.sqrt(delta)
    return ((1 - w * u) - r) / ((1 - w * u) + r)


def classify_degree2(u: complex, w: complex, tol: Tolerances = DEFAULT) -> DynamicsClass:
    """Classify through lambda and the cardioid, cross-checked against the dynamics of B."""
    B = Degree2Product(u, w)
    if B.u == B.w:
        return classify_unicritical(2, B.u, tol)
    lam = lambda_invariant(B.u, B.w).value
    mem = epicycloid_membership(2, lam, tol.band)
    try:
        dyn = classify_dynamics(B.blaschke(), tol)
    except AmbiguousClassification:
        if mem.region is not Region.BOUNDARY:
            raise
        dyn = None
    if mem.region is Region.BOUNDARY:
        if dyn is not None and dyn.kind is DynamicsKind.PARABOLIC:
            return dyn
        # the Denjoy-Wolff point of B_lam pulled back through the conjugator
        zl = cmath.exp(2j * mem.boundary_theta)
        M = conjugator(B.u, B.w, tol).map
        z0 = M.inverse()(zl)
        return DynamicsClass(DynamicsKind.PARABOLIC, z0, complex(boundary_multiplier(2, lam, zl)))
    if dyn.kind is not EXPECTED_KIND[mem.region]:
        raise InconsistentClassification(
            f"u={B.u!r}, w={B.w!r}: dynamics say {dyn.kind.value}, "
            f"lambda={lam!r} lies {mem.region.value} the cardioid"
        )
    return dyn


def degree2_record(u: complex, w: complex, tol: Tolerances = DEFAULT) -> dict:
    """The JSON-ready summary of a degree-2 query."""
    B = Degree2Product(u, w)
    wit = conjugator(B.u, B.w, tol)
    lam = lambda_invariant(B.u, B.w).value
    kind = classify_degree2(B.u, B.w, tol).kind
    return {
        "u": format_complex(B.u),
        "w": format_complex(B.w),
        "c": format_complex(_critical(B.u, B.w)),
        "lambda": format_complex(lam),
        "kind": kind.value,
        "conjugator": wit.map.as_dict(),
        "residual": wit.residual,
    }
