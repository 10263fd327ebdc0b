import json
import math
import subprocess
import sys

import numpy as np
import pytest

from epiblaschke.cli import main, params_raster, real_raster
from epiblaschke.raster import BLACK, MASK, WHITE, axis_nodes, read_ppm
from epiblaschke.unicritical import REGION_CODES, Region, cusps, gamma_d_point, membership_many


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# --- classify -----------------------------------------------------------------


def test_classify_cusp(capsys):
    res = run_json(capsys, "classify", "--d", "2", "--w", "-0.3333333333")
    assert res["kind"] == "parabolic"
    assert res["region"] == "boundary"
    assert res["boundary_theta"] is not None


def test_classify_elliptic_and_hyperbolic(capsys):
    assert run_json(capsys, "classify", "--d", "2", "--w", "0")["kind"] == "elliptic"
    res = run_json(capsys, "classify", "--d", "2", "--w", "-0.5")
    assert res["kind"] == "hyperbolic"
    assert complex(res["dw_point"].replace("i", "j")) == pytest.approx(1)
    assert complex(res["multiplier"].replace("i", "j")).real == pytest.approx(2 / 3, abs=1e-4)
    assert res["region"] == "outside" and res["boundary_theta"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--d", "2", "--w", "abc"],
        ["classify", "--d", "2", "--w", "1.5"],
        ["classify", "--d", "1", "--w", "0"],
        ["classify", "--d", "2"],
        ["bogus"],
        ["classify", "--d", "2", "--w", "0", "--seed", "-1"],
        ["classify", "--d", "2", "--w", "0", "--tol-boundary", "0"],
        ["render-params", "--d", "2", "--resolution", "16"],
        ["render-params", "--d", "2", "--resolution", "8", "--out", "x.ppm"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    diag = json.loads(err)
    assert isinstance(diag["code"], str) and diag["code"]


def test_tolerance_flags_change_the_answer(capsys):
    # just inside the cusp at -1/3, about 1.3e-4 from the curve
    w = "-0.3332"
    res = run_json(capsys, "classify", "--d", "2", "--w", w)
    assert res["region"] == "inside" and res["kind"] == "elliptic"
    res = run_json(capsys, "classify", "--d", "2", "--w", w, "--tol-boundary", "1e-3")
    assert res["region"] == "boundary" and res["kind"] == "parabolic"
    # global flags are accepted before the subcommand as well
    res = run_json(capsys, "--tol-boundary", "1e-3", "classify", "--d", "2", "--w", w)
    assert res["region"] == "boundary"


# --- epicycloid ---------------------------------------------------------------


def test_epicycloid_d2(capsys):
    code, out, _ = run(capsys, "epicycloid", "--d", "2", "--samples", "4")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[0] == ["theta", "re", "im"]
    got = [complex(float(r), float(i)) for _, r, i in rows[1:]]
    want = [-1 / 3, (-1 - 2j) / 3, 1, (-1 + 2j) / 3]
    assert got == pytest.approx(want, abs=1e-15)
    assert [float(t) for t, _, _ in rows[1:]] == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2])


def test_epicycloid_d3_to_file(capsys, tmp_path):
    path = tmp_path / "g.csv"
    code, out, _ = run(capsys, "epicycloid", "--d", "3", "--samples", "2", "--out", str(path))
    assert code == 0 and out == ""
    rows = path.read_text().strip().splitlines()
    vals = [complex(float(r.split(",")[1]), float(r.split(",")[2])) for r in rows[1:]]
    assert vals == pytest.approx([-0.5, 0.5], abs=1e-15)


def test_epicycloid_errors(capsys, tmp_path):
    assert run(capsys, "epicycloid", "--d", "1", "--samples", "4")[0] == 2
    assert run(capsys, "epicycloid", "--d", "2", "--samples", "1")[0] == 2
    code, _, err = run(capsys, "epicycloid", "--d", "2", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 2 and json.loads(err)["code"] == "io_error"


# --- lambda -------------------------------------------------------------------


def _c(text):
    return complex(text.replace("i", "j"))


def test_lambda_examples(capsys):
    res = run_json(capsys, "lambda", "--u", "0", "--w", "0.8")
    assert _c(res["lambda"]) == pytest.approx(2 / 3)
    assert res["kind"] == "elliptic"
    assert res["residual"] < 1e-9
    res = run_json(capsys, "lambda", "--u", "0.5i", "--w", "-0.5i")
    assert _c(res["lambda"]) == pytest.approx(-0.25)
    res = run_json(capsys, "lambda", "--u", "0.3", "--w", "0.3")
    assert _c(res["lambda"]) == pytest.approx(0.3)


# --- render-params ------------------------------------------------------------


def test_render_params_header(capsys, tmp_path):
    path = tmp_path / "p.ppm"
    assert run(capsys, "render-params", "--d", "2", "--resolution", "16", "--out", str(path))[0] == 0
    assert path.read_bytes().startswith(b"P6 16 16 255\n")
    assert read_ppm(path).shape == (16, 16, 3)


def test_render_params_area_matches_monte_carlo(capsys, tmp_path):
    path = tmp_path / "p.ppm"
    assert run(capsys, "render-params", "--d", "2", "--resolution", "400", "--out", str(path))[0] == 0
    img = read_ppm(path)[:, :, 0]
    in_disk = img != MASK
    fraction = np.mean(img[in_disk] == WHITE)

    rng = np.random.default_rng(7)
    n = 1_000_000
    r = np.sqrt(rng.uniform(0, 1, n))
    w = r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    codes, _, _ = membership_many(2, w, 1e-6)
    mc = np.mean(codes == REGION_CODES[Region.INSIDE])
    assert abs(fraction - mc) < 0.02 * mc
    # the cardioid encloses 6 pi / 9 of the unit disk's pi
    assert mc == pytest.approx(2 / 3, abs=0.005)


def test_render_params_marks_cusps():
    raster = params_raster(5, 200)
    pts = raster.points()
    rows, cols = raster.pixel_of(np.array([gamma_d_point(5, t) for t in cusps(5)]))
    assert len(rows) == 4
    for r, c in zip(rows, cols):
        assert abs(abs(pts[r, c]) - 2 / 3) < 2 * max(raster.pixel_size())
    assert raster.marker_mask()[rows, cols].all()


# --- render-real --------------------------------------------------------------


def test_render_real_pixels(capsys, tmp_path):
    path = tmp_path / "r.ppm"
    n = 399
    argv = ["render-real", "--resolution", str(n), "--lambdas", "-0.5", "0.25", "2/3"]
    assert run(capsys, *argv, "--out", str(path))[0] == 2  # "2/3" is not a number

    lams = [-0.5, 0.25, 0.6]
    argv = ["render-real", "--resolution", str(n), "--lambdas", *map(str, lams), "--out", str(path)]
    assert run(capsys, *argv)[0] == 0
    img = read_ppm(path)[:, :, 0]

    nodes = axis_nodes(-1, 1, n)
    col = int(np.argmin(np.abs(nodes - 0.0)))
    row = n - 1 - int(np.argmin(np.abs(nodes - 0.8)))
    assert nodes[col] == pytest.approx(0, abs=1e-15)
    assert (col, row) == (199, 39)
    assert img[row, col] == 213

    # without level curves the picture is symmetric across the diagonal u = w,
    # which swaps (row, col) with (n-1-col, n-1-row)
    argv = ["render-real", "--resolution", str(n), "--out", str(path)]
    assert run(capsys, *argv)[0] == 0
    img = read_ppm(path)[:, :, 0]
    assert (img == img[::-1, ::-1].T).all()


def test_render_real_curves_cross_diagonal_once():
    n = 199
    lams = [-0.7, -0.2, 0.1, 0.5, 0.8]
    raster, groups = real_raster(n, lams)
    diag = raster.overlay_mask(groups[0])
    nodes = axis_nodes(-1, 1, n)
    for lam, g in zip(lams, groups[1:]):
        mask = raster.overlay_mask(g)
        hits = np.argwhere(mask & diag)
        # the hits form one contiguous blob on the diagonal
        assert len(hits) >= 1
        spread = np.ptp(hits[:, 1]) if len(hits) > 1 else 0
        assert spread <= 2
        k = int(np.argmin(np.abs(nodes - lam)))
        want = (n - 1 - k, k)
        assert min(abs(r - want[0]) + abs(c - want[1]) for r, c in hits) <= 1


def test_render_real_rejects_bad_lambda(capsys, tmp_path):
    code, _, err = run(capsys, "render-real", "--resolution", "16", "--lambdas", "1.5",
                       "--out", str(tmp_path / "r.ppm"))
    assert code == 2 and json.loads(err)["code"]


def test_params_resolutions_agree_on_shared_nodes():
    coarse = params_raster(3, 199).cells
    fine = params_raster(3, 399).cells
    assert (fine[1::2, 1::2] == coarse).all()


# --- julia --------------------------------------------------------------------


def _julia(capsys, tmp_path, w, n, seed="5"):
    path = tmp_path / "j.csv"
    code, _, err = run(capsys, "julia", "--d", "2", "--w", w, "--n", str(n), "--seed", seed,
                       "--out", str(path))
    side = json.loads((tmp_path / "j.csv.json").read_text())
    return code, err, path, side


def _read_points(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0] + 1j * data[:, 1]


def test_julia_whole_circle_equidistributes(capsys, tmp_path):
    code, _, path, side = _julia(capsys, tmp_path, "0", 10_000)
    assert code == 0 and side["julia"] == "whole-circle"
    z = _read_points(path)
    assert len(z) == 10_000
    assert np.abs(np.abs(z) - 1).max() < 1e-10
    bins = np.floor((np.angle(z) % (2 * np.pi)) / (2 * np.pi) * 64).astype(int)
    assert len(np.unique(bins)) == 64


def test_julia_cantor_gap(capsys, tmp_path):
    code, _, path, side = _julia(capsys, tmp_path, "-0.5", 10_000)
    assert code == 0 and side["julia"] == "cantor"
    z = _read_points(path)
    gap = np.abs(z - 1).min()
    assert gap > 0.05
    # regression value: the repelling fixed points e^{+-2 pi i/3} bound the Julia set
    assert gap == pytest.approx(math.sqrt(3), abs=1e-3)


def test_julia_at_cusp_reports_no_repelling_point(capsys, tmp_path):
    code, err, path, side = _julia(capsys, tmp_path, "-0.3333333333333333", 100)
    assert side["julia"] == "whole-circle"
    assert abs(_c(side["second_derivative"])) < 1e-9
    assert code == 3
    assert json.loads(err)["code"] == "no_repelling_fixed_point"
    assert not path.exists()


def test_julia_is_deterministic(capsys, tmp_path):
    _, _, path, _ = _julia(capsys, tmp_path, "0.2+0.1i", 500, seed="11")
    first = path.read_bytes()
    _, _, path, _ = _julia(capsys, tmp_path, "0.2+0.1i", 500, seed="11")
    assert path.read_bytes() == first
    _, _, path, _ = _julia(capsys, tmp_path, "0.2+0.1i", 500, seed="12")
    assert path.read_bytes() != first


# --- multibrot ----------------------------------------------------------------


def test_multibrot_outputs(capsys, tmp_path):
    path = tmp_path / "m.ppm"
    assert run(capsys, "multibrot", "--d", "3", "--resolution", "64", "--out", str(path))[0] == 0
    img = read_ppm(path)[:, :, 0]
    assert img.shape == (64, 64)
    assert set(np.unique(img)) <= {0, 128, 255}
    assert img[32, 32] == WHITE
    csv_rows = (tmp_path / "m.ppm.csv").read_text().splitlines()
    assert csv_rows[0] == "alpha,re,im"


# --- determinism and entry point ----------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["render-params", "--d", "3", "--resolution", "48"],
        ["render-real", "--resolution", "48", "--lambdas", "0.2"],
        ["multibrot", "--d", "2", "--resolution", "48"],
    ],
)
def test_rasters_are_byte_identical(capsys, tmp_path, argv):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "epiblaschke", "lambda", "--u", "0", "--w", "0.8"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "elliptic"
