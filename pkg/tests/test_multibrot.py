import cmath
import csv
import math

import numpy as np
import pytest

from epiblaschke.errors import DomainError
from epiblaschke.multibrot import (
    STATUS_CODES,
    CentralStatus,
    MultibrotQuery,
    boundary_curve,
    central_classify_many,
    curve_agreement,
    default_region,
    multibrot_boundary_point,
    multibrot_boundary_points,
    multibrot_central_classify,
    multibrot_component_raster,
    neutral_fixed_point,
    r_d,
    write_boundary_csv,
)
from epiblaschke.polyline import ClosedPolyline
from epiblaschke.unicritical import Epicycloid, epicycloid_point

ALPHAS = 2 * math.pi * np.arange(512) / 512


def test_boundary_examples():
    assert multibrot_boundary_point(2, 0) == pytest.approx(0.25, abs=1e-14)
    assert multibrot_boundary_point(2, math.pi) == pytest.approx(-0.75, abs=1e-14)
    assert multibrot_boundary_point(3, 0) == pytest.approx(3**-0.5 - 3**-1.5, abs=1e-14)
    with pytest.raises(DomainError):
        r_d(1)


@pytest.mark.parametrize("d", range(2, 7))
def test_boundary_has_neutral_fixed_point(d):
    for a in ALPHAS:
        c = multibrot_boundary_point(d, a)
        z0 = neutral_fixed_point(d, a)
        g = MultibrotQuery(d, c)
        assert abs(g(z0) - z0) < 1e-12
        assert abs(abs(d * z0 ** (d - 1)) - 1) < 1e-12


@pytest.mark.parametrize("d", range(2, 7))
def test_boundary_is_reflected_epicycloid(d):
    E = Epicycloid(r_d(d) / d, d - 1)
    for a in ALPHAS[::8]:
        c = multibrot_boundary_point(d, a)
        assert abs(c + epicycloid_point(E, a)) < 1e-12
        if d % 2:
            # for odd d the reflection is the shift alpha -> alpha + pi
            assert abs(c - epicycloid_point(E, a + math.pi)) < 1e-12


def test_even_degree_reflection_is_not_a_shift():
    E = Epicycloid(r_d(2) / 2, 1)
    assert abs(multibrot_boundary_point(2, 0) - epicycloid_point(E, math.pi)) > 0.1


@pytest.mark.parametrize("d", range(3, 7))
def test_rotated_copies_coincide_as_sets(d):
    # divisible by d - 1 so rotated samples land on vertices
    alphas, curve = boundary_curve(d, 4200)
    poly = ClosedPolyline(curve, alphas)
    for j in range(1, d - 1):
        rotated = curve * cmath.exp(2j * math.pi * j / (d - 1))
        dist, _ = poly.nearest(rotated)
        assert dist.max() < 1e-12


def test_classify_examples():
    res = multibrot_central_classify(2, 0)
    assert res.status is CentralStatus.ATTRACTING
    assert res.fixed_point == 0 and res.multiplier == 0
    res = multibrot_central_classify(2, 0.25)
    assert res.status is CentralStatus.NEUTRAL
    assert res.fixed_point == pytest.approx(0.5, abs=1e-8)
    assert res.multiplier == pytest.approx(1, abs=1e-8)
    res = multibrot_central_classify(2, 0.3)
    assert res.status is CentralStatus.NONE
    assert res.as_dict() == {"status": "none", "fixed_point": None, "multiplier": None}


@pytest.mark.parametrize("d", range(2, 7))
def test_shrunk_boundary_is_attracting(d):
    cs = 0.999 * multibrot_boundary_points(d, ALPHAS)
    for c in cs:
        assert multibrot_central_classify(d, c).status is CentralStatus.ATTRACTING
    codes = central_classify_many(d, cs)
    assert (codes == STATUS_CODES[CentralStatus.ATTRACTING]).all()


def test_batch_matches_scalar(rng):
    cs = rng.uniform(-1.2, 0.6, 300) + 1j * rng.uniform(-1, 1, 300)
    codes = central_classify_many(3, cs)
    for c, code in zip(cs, codes):
        assert code == STATUS_CODES[multibrot_central_classify(3, c).status]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_raster_agrees_with_curve(d):
    raster = multibrot_component_raster(d, resolution=200)
    rate, count = curve_agreement(raster, d)
    assert count > 0.9 * 200 * 200
    assert rate >= 0.999
    assert raster.overlays


def test_cardioid_raster_at_400():
    raster = multibrot_component_raster(2, default_region(2), 400)
    rate, _ = curve_agreement(raster, 2)
    assert rate >= 0.999
    # the pixel containing the cusp 1/4 is on the boundary band
    row, col = raster.pixel_of(0.25)
    centre = raster.points()[row, col]
    alphas, curve = boundary_curve(2, 2**14)
    dist, _ = ClosedPolyline(curve, alphas).nearest(np.array([centre]))
    assert dist[0] < max(raster.pixel_size())


def test_raster_guards():
    with pytest.raises(DomainError):
        multibrot_component_raster(2, resolution=8)


def test_boundary_csv(tmp_path):
    path = tmp_path / "curve.csv"
    write_boundary_csv(path, 3, samples=16)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["alpha", "re", "im"]
    assert len(rows) == 17
    a, re, im = map(float, rows[1])
    assert a == 0 and complex(re, im) == pytest.approx(multibrot_boundary_point(3, 0))
