"""Command-line interface.

Results go to standard output (JSON) or to the file named by ``--out``.
Failures print a JSON object with a stable ``code`` to standard error and
exit with 2 (usage or I/O) or 3 (mathematical degeneracy).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import errors
from .blaschke import KIND_CODES, DynamicsKind, FiniteBlaschkeProduct, julia_classify, julia_sample
from .config import DEFAULT, Tolerances
from .core import format_complex, parse_complex
from .degree2 import degree2_record
from .multibrot import PALETTE as MULTIBROT_PALETTE
from .multibrot import multibrot_component_raster, write_boundary_csv
from .raster import BLACK, GRAY, MASK, WHITE, ClassificationRaster, Rect, gray_level, grid, write_ppm
from .unicritical import (
    REGION_CODES,
    Region,
    classify_unicritical,
    classify_unicritical_many,
    cusps,
    epicycloid_membership,
    gamma_d_point,
    gamma_d_points,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MATH = 3

MATH_ERRORS = (
    errors.PoleError,
    errors.DegenerateError,
    errors.ConvergenceError,
    errors.AmbiguousClassification,
    errors.InconsistentClassification,
    errors.ExcludedPoint,
    errors.NoRepellingFixedPoint,
)
COMPLEX_FLAGS = ("--w", "--u")


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    tol: Tolerances
    seed: int
    out: Optional[Path]


def _complex(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    x = float(text)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _resolution(text: str) -> int:
    n = int(text)
    if n < 16:
        raise argparse.ArgumentTypeError("resolution must be at least 16")
    return n


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--tol-boundary", type=_positive, default=default,
                        help="half-width of the boundary band around the parabolic curve")
    parser.add_argument("--tol-parabolic", type=_positive, default=default,
                        help="|multiplier - 1| below which a boundary fixed point is parabolic")
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--out", type=Path, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epiblaschke", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="dynamics of ((z - w)/(1 - conj(w) z))^d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=_complex, required=True)

    p = sub.add_parser("epicycloid", parents=[common], help="CSV samples of gamma_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, default=1024)

    p = sub.add_parser("lambda", parents=[common], help="degree-2 invariant and conjugator")
    p.add_argument("--u", type=_complex, required=True)
    p.add_argument("--w", type=_complex, required=True)

    p = sub.add_parser("render-params", parents=[common], help="PPM of the unicritical parameter disk")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--resolution", type=_resolution, default=400)

    p = sub.add_parser("render-real", parents=[common], help="PPM of lambda over real zero pairs")
    p.add_argument("--resolution", type=_resolution, default=400)
    p.add_argument("--lambdas", type=float, nargs="*", default=[])

    p = sub.add_parser("julia", parents=[common], help="CSV samples of the Julia set")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--w", type=_complex, required=True)
    p.add_argument("--n", type=int, default=10_000)

    p = sub.add_parser("multibrot", parents=[common], help="PPM of the Multibrot central component")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--resolution", type=_resolution, default=400)
    return parser


def _join_complex_flags(argv: list) -> list:
    """Glue '--w -0.5i' into '--w=-0.5i' so argparse does not read it as a flag."""
    out = []
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok in COMPLEX_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(tok)
    return out


def _config(args) -> RunConfig:
    changes = {}
    if args.tol_boundary is not None:
        changes["band"] = args.tol_boundary
    if args.tol_parabolic is not None:
        changes["parabolic"] = args.tol_parabolic
    seed = 0 if args.seed is None else args.seed
    if not 0 <= seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    return RunConfig(DEFAULT.with_(**changes) if changes else DEFAULT, seed, args.out)


def _need_out(cfg: RunConfig) -> Path:
    if cfg.out is None:
        raise UsageError("--out is required for this command")
    return cfg.out


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_classify(args, cfg: RunConfig) -> int:
    dyn = classify_unicritical(args.d, args.w, cfg.tol)
    mem = epicycloid_membership(args.d, args.w, cfg.tol.band)
    _emit({"d": args.d, "w": format_complex(args.w), **dyn.as_dict(), **mem.as_dict()})
    return EXIT_OK


def epicycloid_csv(d: int, samples: int) -> str:
    if samples < 2:
        raise errors.DomainError("samples must be at least 2")
    lines = ["theta,re,im"]
    for k in range(samples):
        theta = 2 * math.pi * k / samples
        z = gamma_d_point(d, theta)
        lines.append(f"{theta:.17g},{z.real:.17g},{z.imag:.17g}")
    return "\n".join(lines) + "\n"


def cmd_epicycloid(args, cfg: RunConfig) -> int:
    text = epicycloid_csv(args.d, args.samples)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)
    return EXIT_OK


def cmd_lambda(args, cfg: RunConfig) -> int:
    _emit(degree2_record(args.u, args.w, cfg.tol))
    return EXIT_OK


PARAMS_PALETTE = {
    KIND_CODES[DynamicsKind.ELLIPTIC]: WHITE,
    KIND_CODES[DynamicsKind.HYPERBOLIC]: GRAY,
    KIND_CODES[DynamicsKind.PARABOLIC]: BLACK,
    -1: BLACK,
}


def params_raster(d: int, resolution: int, tol: Tolerances = DEFAULT) -> ClassificationRaster:
    """Dynamics of B_w over [-1, 1]^2; cells outside the disk get code -2."""
    region = Rect(-1.0, 1.0, -1.0, 1.0)
    W = grid(region, resolution, resolution)
    disk = np.abs(W) < 1
    cells = np.full(W.shape, -2, dtype=np.int8)
    regions, kinds = classify_unicritical_many(d, W[disk], tol, band=tol.band)
    kinds[regions == REGION_CODES[Region.BOUNDARY]] = -1
    cells[disk] = kinds
    raster = ClassificationRaster(
        region, resolution, resolution, cells,
        legend={0: "elliptic", 1: "hyperbolic", 2: "parabolic", -1: "band", -2: "outside disk"},
    )
    thetas = np.linspace(0.0, 2 * math.pi, 8 * 4096 + 1)
    raster.add_overlay(gamma_d_points(d, thetas))
    raster.markers.extend(gamma_d_point(d, t) for t in cusps(d))
    return raster


def params_image(raster: ClassificationRaster) -> np.ndarray:
    return raster.to_gray({**PARAMS_PALETTE, -2: MASK})


def cmd_render_params(args, cfg: RunConfig) -> int:
    out = _need_out(cfg)
    write_ppm(out, params_image(params_raster(args.d, args.resolution, cfg.tol)))
    return EXIT_OK


def real_raster(resolution: int, lambdas=()) -> tuple:
    """Gray level of lambda(u, w) over (-1, 1)^2 with u across and w up.

    Returns the raster and a list of overlay-index groups: group 0 is the
    diagonal u = w, group k the f_lambda curve of ``lambdas[k - 1]``.
    """
    region = Rect(-1.0, 1.0, -1.0, 1.0)
    Z = grid(region, resolution, resolution)
    u, w = Z.real, Z.imag
    s = w + u
    lam = (s - 2 * w * u) / (2 - s)
    raster = ClassificationRaster(region, resolution, resolution, gray_level(lam))
    t = np.linspace(-1.0, 1.0, 2 * resolution + 1)
    groups = [raster.add_overlay(t + 1j * t)]
    for lam_k in lambdas:
        if not -1 < lam_k < 1:
            raise errors.DomainError(f"lambda must lie in (-1, 1), got {lam_k!r}")
        us = np.linspace(-1.0, 1.0, 40 * resolution + 1)[1:-1]
        us = us[2 * us != 1 + lam_k]
        # same rearrangement as degree2.f_lambda
        ws = lam_k + (1 - lam_k) * (us - lam_k) / (2 * us - 1 - lam_k)
        groups.append(raster.add_overlay(us + 1j * ws))
    return raster, groups


def real_image(raster: ClassificationRaster, groups: list) -> np.ndarray:
    img = raster.cells.astype(np.uint8).copy()
    img[raster.overlay_mask(groups[0])] = WHITE
    for g in groups[1:]:
        img[raster.overlay_mask(g)] = BLACK
    return img


def cmd_render_real(args, cfg: RunConfig) -> int:
    out = _need_out(cfg)
    write_ppm(out, real_image(*real_raster(args.resolution, args.lambdas)))
    return EXIT_OK


def cmd_julia(args, cfg: RunConfig) -> int:
    out = _need_out(cfg)
    if args.n < 1:
        raise errors.DomainError("n must be positive")
    B = FiniteBlaschkeProduct.unicritical(args.d, args.w)
    info = julia_classify(B, cfg.tol).as_dict()
    Path(f"{out}.json").write_text(json.dumps(info, sort_keys=True) + "\n")
    pts = julia_sample(B, args.n, cfg.seed, tol=cfg.tol)
    lines = ["re,im"] + [f"{z.real:.17g},{z.imag:.17g}" for z in pts]
    out.write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_multibrot(args, cfg: RunConfig) -> int:
    out = _need_out(cfg)
    raster = multibrot_component_raster(args.d, resolution=args.resolution, tol=cfg.tol)
    write_ppm(out, raster.to_gray(MULTIBROT_PALETTE))
    write_boundary_csv(f"{out}.csv", args.d)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "epicycloid": cmd_epicycloid,
    "lambda": cmd_lambda,
    "render-params": cmd_render_params,
    "render-real": cmd_render_real,
    "julia": cmd_julia,
    "multibrot": cmd_multibrot,
}


def _fail(code: str, message: str, status: int, **extra) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message, **extra}, sort_keys=True) + "\n")
    return status


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_complex_flags(argv))
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        return _fail(exc.code, str(exc), EXIT_USAGE)
    except MATH_ERRORS as exc:
        return _fail(exc.code, str(exc), EXIT_MATH, argv=argv)
    except errors.EpiError as exc:
        return _fail(exc.code, str(exc), EXIT_USAGE)
    except OSError as exc:
        return _fail("io_error", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
