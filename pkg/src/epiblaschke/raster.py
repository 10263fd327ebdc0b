"""Classification rasters over rectangles of the plane and a binary PPM writer.

Pixels sample the interior nodes of an (n + 1)-interval grid, so a raster of
resolution n never touches the rectangle's edges and the nodes of resolution
n are a subset of those of resolution 2n + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

WHITE = 255
BLACK = 0
GRAY = 128
MASK = 64


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("empty rectangle")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        return (
            (z.real >= self.re_min) & (z.real <= self.re_max)
            & (z.imag >= self.im_min) & (z.imag <= self.im_max)
        )


def axis_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (hi - lo) * (np.arange(n) + 1) / (n + 1)


def grid(region: Rect, width: int, height: int) -> np.ndarray:
    """Complex pixel positions, shape (height, width), row 0 at the top."""
    xs = axis_nodes(region.re_min, region.re_max, width)
    ys = axis_nodes(region.im_min, region.im_max, height)[::-1]
    return xs[None, :] + 1j * ys[:, None]


def round_half_away(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


HALF_SNAP = 1e-9


def gray_level(value, lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    """Affine map of [lo, hi] onto 0..255, halves rounded away from zero.

    Levels within ``HALF_SNAP`` of a half step count as exact halves, so a
    value such as 2/3 lands on the level its exact arithmetic gives.
    """
    x = 255.0 * (np.asarray(value, float) - lo) / (hi - lo)
    half = np.floor(x) + 0.5
    x = np.where(np.abs(x - half) <= HALF_SNAP, half, x)
    return np.clip(round_half_away(x), 0, 255).astype(np.uint8)


@dataclass
class ClassificationRaster:
    """Per-pixel integer codes over ``region`` plus overlay polylines.

    ``legend`` maps codes to names; ``overlays`` holds contiguous complex
    point runs inside the region.
    """

    region: Rect
    width: int
    height: int
    cells: np.ndarray
    legend: dict = field(default_factory=dict)
    overlays: list = field(default_factory=list)
    markers: list = field(default_factory=list)

    def __post_init__(self):
        if self.cells.shape != (self.height, self.width):
            raise ValueError("cells must have shape (height, width)")

    def points(self) -> np.ndarray:
        return grid(self.region, self.width, self.height)

    def pixel_size(self) -> tuple:
        r = self.region
        return (r.re_max - r.re_min) / (self.width + 1), (r.im_max - r.im_min) / (self.height + 1)

    def add_overlay(self, pts) -> list:
        """Add a polyline split into the runs that stay inside the region.

        Returns the overlay indices of the added runs.
        """
        pts = np.asarray(pts, dtype=complex)
        inside = self.region.contains(pts)
        edges = np.flatnonzero(np.diff(inside.astype(np.int8))) + 1
        added = []
        for run in np.split(pts, edges):
            if len(run) and self.region.contains(run[:1]).all():
                added.append(len(self.overlays))
                self.overlays.append(run)
        return added

    def pixel_of(self, z) -> tuple:
        """Nearest (row, col) for points z; may fall outside the raster."""
        z = np.asarray(z, dtype=complex)
        dx, dy = self.pixel_size()
        col = np.rint((z.real - self.region.re_min) / dx - 1).astype(int)
        row = np.rint((self.region.im_max - z.imag) / dy - 1).astype(int)
        return row, col

    def overlay_mask(self, indices=None) -> np.ndarray:
        """Pixels hit by the overlays, densified to under half a pixel per step."""
        mask = np.zeros((self.height, self.width), dtype=bool)
        chosen = self.overlays if indices is None else [self.overlays[i] for i in indices]
        for pts in chosen:
            dense = densify(pts, 0.5 * min(self.pixel_size()))
            row, col = self.pixel_of(dense)
            ok = (row >= 0) & (row < self.height) & (col >= 0) & (col < self.width)
            mask[row[ok], col[ok]] = True
        return mask

    def marker_mask(self, radius: int = 1) -> np.ndarray:
        mask = np.zeros((self.height, self.width), dtype=bool)
        if not self.markers:
            return mask
        row, col = self.pixel_of(np.asarray(self.markers))
        for r, c in zip(row, col):
            mask[max(r - radius, 0) : r + radius + 1, max(c - radius, 0) : c + radius + 1] = True
        return mask

    def to_gray(self, palette: dict, overlay_level: int = BLACK) -> np.ndarray:
        img = np.full(self.cells.shape, GRAY, dtype=np.uint8)
        for code, level in palette.items():
            img[self.cells == code] = level
        img[self.overlay_mask() | self.marker_mask()] = overlay_level
        return img


def densify(pts: np.ndarray, step: float) -> np.ndarray:
    """Insert points along each segment so that none is longer than ``step``."""
    pts = np.asarray(pts, dtype=complex)
    if len(pts) < 2:
        return pts
    k = np.maximum(np.ceil(np.abs(np.diff(pts)) / step).astype(int), 1)
    start = np.repeat(pts[:-1], k)
    delta = np.repeat(np.diff(pts) / k, k)
    offs = np.arange(k.sum()) - np.repeat(np.cumsum(k) - k, k)
    return np.concatenate([start + offs * delta, pts[-1:]])


def write_ppm(path, gray: np.ndarray) -> None:
    """Binary P6 with equal RGB channels."""
    gray = np.asarray(gray, dtype=np.uint8)
    h, w = gray.shape
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    with open(Path(path), "wb") as fh:
        fh.write(f"P6 {w} {h} 255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    """Inverse of :func:`write_ppm` for files it produced; returns (h, w, 3) uint8."""
    data = Path(path).read_bytes()
    header, _, body = data.partition(b"\n")
    magic, w, h, maxval = header.split()
    if magic != b"P6" or maxval != b"255":
        raise ValueError("not a P6 file written by this module")
    w, h = int(w), int(h)
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3)
