"""Complex-plane and hyperbolic-disk primitives."""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

from .errors import DegenerateError, DomainError, PoleError

DET_RTOL = 1e-14
POLE_TOL = 1e-14

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*(?:(?P<re>[+-]?{_NUM})(?:(?P<isign>[+-])(?P<im>{_NUM})?i)?"
    rf"|(?P<pure>[+-]?(?:{_NUM})?)i)\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse ``"a+bi"``, ``"a-bi"``, ``"bi"`` or a bare real ``"a"``."""
    m = _COMPLEX_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse complex literal {text!r}")
    if m.group("re") is not None:
        re_part = float(m.group("re"))
        if m.group("isign") is None:
            im_part = 0.0
        else:
            mag = float(m.group("im")) if m.group("im") else 1.0
            im_part = mag if m.group("isign") == "+" else -mag
    else:
        pure = m.group("pure")
        if pure in ("", "+"):
            im_part = 1.0
        elif pure == "-":
            im_part = -1.0
        else:
            im_part = float(pure)
        re_part = 0.0
    z = complex(re_part, im_part)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex literal {text!r}")
    return z


def format_complex(z: complex) -> str:
    """Inverse of :func:`parse_complex` at 17 significant digits."""
    z = complex(z)
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(im):.17g}i"


@dataclass(frozen=True)
class MoebiusMap:
    """The map z -> (a z + b) / (c z + d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError(f"coefficient {name} is not finite")
            object.__setattr__(self, name, v)
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if abs(self.determinant) <= DET_RTOL * scale:
            raise DegenerateError("Moebius map has vanishing determinant")

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def rotation(cls, angle: float) -> "MoebiusMap":
        return cls(cmath.exp(1j * angle), 0, 0, 1)

    def __call__(self, z: complex) -> complex:
        return moebius_apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return moebius_compose(self, other)

    def inverse(self) -> "MoebiusMap":
        return moebius_inverse(self)

    def as_dict(self) -> dict:
        return {k: format_complex(getattr(self, k)) for k in "abcd"}


def disk_automorphism(center: complex, phase: float = 0.0) -> MoebiusMap:
    """``e^{i phase} (z - center) / (1 - conj(center) z)``."""
    center = complex(center)
    if not abs(center) < 1:
        raise DomainError("disk automorphism center must lie in the open unit disk")
    rot = cmath.exp(1j * phase)
    return MoebiusMap(rot, -rot * center, -center.conjugate(), 1)


def moebius_apply(m: MoebiusMap, z: complex) -> complex:
    den = m.c * z + m.d
    if abs(den) <= POLE_TOL:
        raise PoleError(f"{z!r} is a pole of the map")
    return (m.a * z + m.b) / den


def moebius_compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """Return ``m1 o m2``."""
    return MoebiusMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def moebius_inverse(m: MoebiusMap) -> MoebiusMap:
    return MoebiusMap(m.d, -m.b, -m.c, m.a)


def cross_ratio(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    """((z1 - z3)(z2 - z4)) / ((z1 - z4)(z2 - z3))."""
    den = (z1 - z4) * (z2 - z3)
    if den == 0:
        raise DegenerateError("cross-ratio denominator vanishes")
    return (z1 - z3) * (z2 - z4) / den


def pseudo_distance(z1: complex, z2: complex) -> float:
    """|(z1 - z2) / (1 - conj(z1) z2)|, the pseudo-hyperbolic distance."""
    return abs((z1 - z2) / (1 - z1.conjugate() * z2))


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    z1, z2 = complex(z1), complex(z2)
    if not (abs(z1) < 1 and abs(z2) < 1):
        raise DomainError("hyperbolic distance needs points in the open unit disk")
    rho = pseudo_distance(z1, z2)
    # log((1 + rho) / (1 - rho)) without the cancellation for small rho
    return 2.0 * math.atanh(min(rho, math.nextafter(1.0, 0.0)))
