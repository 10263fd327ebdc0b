import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import disk_points, random_disk
from epiblaschke.core import (
    MoebiusMap,
    cross_ratio,
    disk_automorphism,
    format_complex,
    hyperbolic_distance,
    moebius_apply,
    moebius_compose,
    moebius_inverse,
    parse_complex,
)
from epiblaschke.errors import DegenerateError, DomainError, PoleError


@pytest.mark.parametrize(
    "text, value",
    [
        ("-0.2+0.1i", complex(-0.2, 0.1)),
        ("0.25", 0.25),
        ("1-2i", 1 - 2j),
        ("0.5i", 0.5j),
        ("-0.5i", -0.5j),
        ("i", 1j),
        ("-i", -1j),
        ("1e-3+2.5e2i", complex(1e-3, 250)),
        ("  3 ", 3),
    ],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+", "1+2j", "nan", "1e999"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e300))
def test_format_round_trip(z):
    assert parse_complex(format_complex(z)) == z


def test_moebius_apply_examples():
    p = disk_automorphism(0.5)
    assert moebius_apply(p, 0.5) == 0
    assert moebius_apply(p, 1) == pytest.approx(1, abs=1e-15)
    assert moebius_apply(p, 0.8) == pytest.approx(0.5, abs=1e-15)


def test_pole_and_degenerate():
    with pytest.raises(PoleError):
        moebius_apply(MoebiusMap(1, 0, 1, -2), 2)
    with pytest.raises(DegenerateError):
        MoebiusMap(1, 2, 2, 4)
    with pytest.raises(DomainError):
        disk_automorphism(1.0)


def test_compose_identity_and_inverse(rng):
    M = MoebiusMap(1 + 2j, 0.3, -0.1j, 2)
    assert moebius_compose(MoebiusMap.identity(), M) == M
    MM = moebius_compose(M, moebius_inverse(M))
    for z in (0.1, 0.3j, -0.5 + 0.2j):
        assert abs(MM(z) - z) < 1e-12


def test_composite_automorphisms_preserve_circle(rng):
    a, b = random_disk(rng, 2, 0.9)
    M = disk_automorphism(a, 1.0) @ disk_automorphism(b, 2.0)
    for t in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        assert abs(abs(M(cmath.exp(1j * t))) - 1) < 1e-12


def test_inverse_examples(rng):
    assert moebius_inverse(MoebiusMap.identity())(0.3 + 0.1j) == 0.3 + 0.1j
    p = MoebiusMap(1, -0.5, -0.5, 1)
    assert moebius_inverse(p)(0) == pytest.approx(0.5)
    for z in random_disk(rng, 100):
        assert abs(p.inverse()(p(z)) - z) < 1e-12


@given(disk_points(0.9), st.floats(0, 2 * math.pi), disk_points(0.999))
def test_automorphism_maps_disk_to_disk(a, t, z):
    M = disk_automorphism(a, t)
    assert abs(M(z)) < 1
    e = cmath.exp(1j * t)
    assert abs(abs(M(e)) - 1) < 1e-12


def test_cross_ratio_examples():
    assert cross_ratio(0, 1, 2, 3) == pytest.approx(4 / 3)
    u, w = 0.1, 0.8
    delta = (1 - w * w) * (1 - u * u)
    assert cross_ratio(w, u, 1 / w, 1 / u) == pytest.approx(delta / (1 - u * w) ** 2, rel=1e-14)
    assert delta / (1 - u * w) ** 2 == pytest.approx(0.421077, abs=1e-6)
    with pytest.raises(DegenerateError):
        cross_ratio(1, 2, 2, 3)


def test_cross_ratio_moebius_invariance(rng):
    for _ in range(50):
        z = random_disk(rng, 4)
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        M = MoebiusMap(a, b, c, d)
        before = cross_ratio(*z)
        after = cross_ratio(*(M(complex(x)) for x in z))
        assert abs(after - before) <= 1e-12 * max(1.0, abs(before)) * 100


def test_hyperbolic_distance_examples():
    assert hyperbolic_distance(0, 0) == 0
    assert hyperbolic_distance(0, 0.5) == pytest.approx(math.log(3), rel=1e-15)
    with pytest.raises(DomainError):
        hyperbolic_distance(0, 1)


def test_hyperbolic_distance_automorphism_invariance(rng):
    for _ in range(100):
        z1, z2, a = random_disk(rng, 3, 0.9)
        M = disk_automorphism(a, rng.uniform(0, 2 * np.pi))
        assert hyperbolic_distance(M(z1), M(z2)) == pytest.approx(hyperbolic_distance(z1, z2), abs=1e-11)


@settings(max_examples=200)
@given(disk_points(), disk_points(), disk_points())
def test_hyperbolic_triangle_inequality(a, b, c):
    ab, bc, ac = hyperbolic_distance(a, b), hyperbolic_distance(b, c), hyperbolic_distance(a, c)
    assert ac <= ab + bc + 1e-12
    assert hyperbolic_distance(b, a) == pytest.approx(ab, abs=1e-12)
