"""Dense complex polynomials and a simultaneous-iteration root finder.

Scalar roots start from companion-matrix eigenvalues, are polished with the
Aberth-Ehrlich iteration, and then pass through a cluster step that snaps
numerically multiple roots onto a simple root of the appropriate derivative.  ``poly_roots_batch`` solves many
small polynomials of equal degree at once with numpy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

EPS = np.finfo(float).eps
MAX_ITER = 500
STEP_TOL = 1e-13
CLUSTER_RTOL = 1e-4
# relative coefficient error a cluster snap may introduce
SNAP_BACKWARD_TOL = 1e-10


@dataclass(frozen=True)
class ComplexPolynomial:
    """Coefficients in ascending degree order, trailing zeros trimmed."""

    coefficients: tuple

    def __init__(self, coefficients: Iterable[complex]):
        coeffs = [complex(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DomainError("zero polynomial")
        for c in coeffs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError("non-finite coefficient")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "ComplexPolynomial":
        return cls(expand_roots(roots, leading))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def derivative(self, order: int = 1) -> "ComplexPolynomial":
        coeffs = _derivative_coeffs(self.coefficients, order)
        if not any(coeffs):
            raise DomainError("derivative order exceeds degree")
        return ComplexPolynomial(coeffs)

    def __mul__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return ComplexPolynomial(poly_mul(self.coefficients, other.coefficients))

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        a, b = list(self.coefficients), list(other.coefficients)
        n = max(len(a), len(b))
        a += [0j] * (n - len(a))
        b += [0j] * (n - len(b))
        return ComplexPolynomial([x - y for x, y in zip(a, b)])


def poly_mul(a: Sequence[complex], b: Sequence[complex]) -> list:
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def expand_roots(roots: Iterable[complex], leading: complex = 1.0) -> list:
    """Ascending coefficients of ``leading * prod(z - r)``."""
    coeffs = [complex(leading)]
    for r in roots:
        coeffs = poly_mul(coeffs, [-complex(r), 1.0])
    return coeffs


def _horner(coeffs: Sequence[complex], z: complex):
    """Value, derivative and a rounding-error bound for the value."""
    p = 0j
    dp = 0j
    bound = 0.0
    az = abs(z)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
        bound = bound * az + abs(c)
    return p, dp, 4.0 * len(coeffs) * EPS * bound


def _companion_roots(coeffs: Sequence[complex]) -> list:
    """Eigenvalues of the companion matrix: backward-stable starting values."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -c[-2::-1] / c[-1]
    comp[np.arange(1, n), np.arange(n - 1)] = 1.0
    return [complex(z) for z in np.linalg.eigvals(comp)]


def _aberth(coeffs: Sequence[complex], z: list, max_iter: int, step_tol: float) -> list:
    n = len(z)
    done = [False] * n
    for _ in range(max_iter):
        for k in range(n):
            if done[k]:
                continue
            zk = z[k]
            p, dp, bound = _horner(coeffs, zk)
            if abs(p) <= bound:
                done[k] = True
                continue
            s = 0j
            for j in range(n):
                if j != k:
                    diff = zk - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            if dp == 0:
                step = complex(1e-3 * max(1.0, abs(zk)), 0)
            else:
                ratio = p / dp
                denom = 1.0 - ratio * s
                step = ratio / denom if denom != 0 else ratio
            z[k] = zk - step
            if abs(step) <= step_tol * max(1.0, abs(zk)):
                done[k] = True
        if all(done):
            return z
    raise ConvergenceError(f"Aberth iteration did not converge in {max_iter} steps")


def _newton(coeffs: Sequence[complex], z: complex, steps: int = 60) -> complex:
    for _ in range(steps):
        p, dp, _ = _horner(coeffs, z)
        if dp == 0:
            break
        step = p / dp
        z -= step
        if abs(step) <= 4 * EPS * max(1.0, abs(z)):
            break
    return z


def _derivative_coeffs(coeffs: Sequence[complex], order: int) -> list:
    out = list(coeffs)
    for _ in range(order):
        out = [k * c for k, c in enumerate(out)][1:]
    return out


def _components(indices: list, linked) -> list:
    """Connected components of ``indices`` under the symmetric relation ``linked``."""
    parent = {i: i for i in indices}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, i in enumerate(indices):
        for j in indices[a + 1 :]:
            if linked(i, j):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in indices:
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _multiple_root(coeffs: Sequence[complex], pts: list):
    """The m-fold root that ``pts`` approximate, or None if they are not one."""
    m = len(pts)
    centroid = sum(pts) / m
    spread = max(abs(p - centroid) for p in pts)
    xi = _newton(_derivative_coeffs(coeffs, m - 1), centroid)
    if abs(xi - centroid) > 10 * spread + 1e-12:
        return None
    for k in range(m - 1):
        p, _, bound = _horner(_derivative_coeffs(coeffs, k), xi)
        if abs(p) > 64 * bound:
            return None
    return xi


def _snap_clusters(coeffs: Sequence[complex], roots: list) -> list:
    """Replace clusters that behave like one multiple root by that root.

    Clusters are found by overlapping Newton inclusion disks.  A cluster of
    size m is accepted when the simple root of the (m-1)-th derivative near
    its centroid annihilates the polynomial and its first m - 2 derivatives
    to rounding level; a rejected cluster is retried as its tighter
    sub-clusters.  Isolated roots are then refined against the deflated
    polynomial.
    """
    n = len(roots)
    radius = []
    for z in roots:
        p, dp, bound = _horner(coeffs, z)
        radius.append(n * max(abs(p), bound) / abs(dp) if dp != 0 else math.inf)

    def tight(i, j):
        return abs(roots[i] - roots[j]) <= CLUSTER_RTOL * max(1.0, abs(roots[i]), abs(roots[j]))

    def loose(i, j):
        return tight(i, j) or abs(roots[i] - roots[j]) <= radius[i] + radius[j]

    limit = max(2 * _backward_error(coeffs, roots), SNAP_BACKWARD_TOL)
    out = list(roots)
    snapped = [False] * n
    isolated = [True] * n
    for group in _components(list(range(n)), loose):
        if len(group) < 2:
            continue
        for i in group:
            isolated[i] = False
        xi = _multiple_root(coeffs, [roots[i] for i in group])
        candidates = [(group, xi)] if xi is not None else [
            (sub, _multiple_root(coeffs, [roots[i] for i in sub]))
            for sub in _components(group, tight)
            if len(sub) >= 2
        ]
        for members, xi in candidates:
            if xi is None:
                continue
            trial = list(out)
            for i in members:
                trial[i] = xi
            # a snap next to an unsnapped neighbour can trade away backward stability
            if _backward_error(coeffs, trial) <= limit:
                out = trial
                for i in members:
                    snapped[i] = True
    polished = _polish(coeffs, out, snapped, isolated)
    return polished if _backward_error(coeffs, polished) <= limit else out


def _backward_error(coeffs: Sequence[complex], roots: list) -> float:
    """Largest coefficient error of the re-expanded roots, relative to max |coeff|."""
    lead = coeffs[-1]
    c = np.asarray(coeffs, dtype=complex)
    e = lead * np.poly(np.asarray(roots, dtype=complex))[::-1]
    return float(np.abs(e - c).max() / np.abs(c).max())


def _deflate(coeffs: Sequence[complex], r: complex) -> list:
    """Quotient of the polynomial by (z - r), ascending; remainder dropped."""
    n = len(coeffs) - 1
    b = [0j] * n
    b[n - 1] = coeffs[n]
    for k in range(n - 1, 0, -1):
        b[k - 1] = coeffs[k] + r * b[k]
    return b


def _polish(coeffs: Sequence[complex], z: list, fixed: list, isolated: list) -> list:
    """Refine the free roots on the quotient by the pinned ones.

    Next to a pinned cluster a simple root is poorly located by evaluating
    the full polynomial; on the deflated quotient it is well conditioned and
    the multiset reproduces the coefficients to rounding level.
    """
    if not any(fixed) or all(fixed):
        return z
    q = list(coeffs)
    for k, zk in enumerate(z):
        if fixed[k]:
            q = _deflate(q, zk)
    z = list(z)
    free = [k for k in range(len(z)) if not fixed[k] and isolated[k]]
    for k in free:
        cand = -q[0] / q[1] if len(q) == 2 else _newton(q, z[k])
        # deflation leaves absolute rounding in the low-order coefficients;
        # keep the refinement only if the full polynomial still vanishes there
        p, _, bound = _horner(coeffs, cand)
        if abs(p) <= 64 * bound:
            z[k] = cand
    return z


def poly_roots(poly, *, max_iter: int = MAX_ITER, step_tol: float = STEP_TOL) -> list:
    """All roots of ``poly`` with multiplicity.

    ``poly`` is a :class:`ComplexPolynomial` or an ascending coefficient
    sequence.  Raises :class:`ConvergenceError` when the iteration cap is hit.
    """
    if not isinstance(poly, ComplexPolynomial):
        poly = ComplexPolynomial(poly)
    coeffs = list(poly.coefficients)
    if len(coeffs) < 2:
        raise DomainError("poly_roots needs degree >= 1")
    zeros = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    roots = [0j] * zeros
    n = len(coeffs) - 1
    if n == 0:
        return roots
    if n == 1:
        return roots + [-coeffs[0] / coeffs[1]]
    z = _aberth(coeffs, _companion_roots(coeffs), max_iter, step_tol)
    return roots + _snap_clusters(coeffs, z)


def poly_roots_batch(coeffs: np.ndarray, *, polish_iter: int = 60) -> tuple:
    """Roots of many polynomials of one degree.

    ``coeffs`` has shape (N, n + 1), ascending, with nonzero leading column.
    Starting values come from companion-matrix eigenvalues and are polished
    with vectorised Aberth steps.  Returns ``(roots, ok)`` where ``ok`` flags
    rows whose polish met the scalar stopping rule; callers route the rest to
    :func:`poly_roots`.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    N, m = coeffs.shape
    n = m - 1
    lead = coeffs[:, -1]
    comp = np.zeros((N, n, n), dtype=complex)
    comp[:, 0, :] = -coeffs[:, -2::-1] / lead[:, None]
    if n > 1:
        idx = np.arange(n - 1)
        comp[:, idx + 1, idx] = 1.0
    with np.errstate(all="ignore"):
        z = np.linalg.eigvals(comp)
        absc = np.abs(coeffs)
        done = np.zeros_like(z, dtype=bool)
        offdiag = ~np.eye(n, dtype=bool)
        for _ in range(polish_iter):
            p = np.zeros_like(z)
            dp = np.zeros_like(z)
            bound = np.zeros(z.shape)
            az = np.abs(z)
            for k in range(n, -1, -1):
                dp = dp * z + p
                p = p * z + coeffs[:, k : k + 1]
                bound = bound * az + absc[:, k : k + 1]
            bound *= 4.0 * m * EPS
            diff = z[:, :, None] - z[:, None, :]
            inv = np.where(offdiag, 1.0 / np.where(offdiag, diff, 1.0), 0.0)
            s = inv.sum(axis=2)
            ratio = p / dp
            step = ratio / (1.0 - ratio * s)
            small_res = np.abs(p) <= bound
            step = np.where(done | small_res, 0.0, step)
            z = z - step
            done |= small_res | (np.abs(step) <= STEP_TOL * np.maximum(1.0, az))
            if done.all():
                break
    ok = done.all(axis=1) & np.isfinite(z).all(axis=1)
    return z, ok
