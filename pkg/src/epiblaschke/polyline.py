"""Closed polylines: winding numbers and nearest-point queries for many points."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


class ClosedPolyline:
    """A closed polyline sampled from a curve ``t -> vertices[i]`` at ``params[i]``.

    Winding numbers use a horizontal-ray crossing count restricted to the
    segments whose y-range covers the query row (bucketed by y).  Distances
    use a k-d tree over vertices, then exact point-to-segment distances for
    the segments adjacent to the nearest few vertices.
    """

    def __init__(self, vertices: np.ndarray, params: np.ndarray | None = None, buckets: int = 4096):
        v = np.asarray(vertices, dtype=complex)
        self.vertices = v
        n = len(v)
        self.params = np.arange(n, dtype=float) if params is None else np.asarray(params, float)
        self.start = v
        self.end = np.roll(v, -1)
        y0, y1 = self.start.imag, self.end.imag
        lo, hi = np.minimum(y0, y1), np.maximum(y0, y1)
        self.ymin, self.ymax = lo.min(), hi.max()
        self.nb = buckets
        self.h = (self.ymax - self.ymin) / buckets or 1.0
        blo = np.clip(((lo - self.ymin) / self.h).astype(int), 0, buckets - 1)
        bhi = np.clip(((hi - self.ymin) / self.h).astype(int), 0, buckets - 1)
        counts = bhi - blo + 1
        seg = np.repeat(np.arange(n), counts)
        offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        bucket = np.repeat(blo, counts) + offs
        order = np.argsort(bucket, kind="stable")
        self._seg = seg[order]
        self._ptr = np.searchsorted(bucket[order], np.arange(buckets + 1))
        self.max_segment = float(np.abs(self.end - self.start).max())
        self._tree = cKDTree(np.column_stack([v.real, v.imag]))

    def winding(self, points) -> np.ndarray:
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        out = np.zeros(pts.shape, dtype=np.int64)
        flat = pts.ravel()
        res = out.ravel()
        inside = (flat.imag >= self.ymin) & (flat.imag <= self.ymax)
        idx = np.flatnonzero(inside)
        if len(idx) == 0:
            return out
        ys, inv = np.unique(flat.imag[idx], return_inverse=True)
        order = np.argsort(inv, kind="stable")
        bounds = np.searchsorted(inv[order], np.arange(len(ys) + 1))
        for k, y in enumerate(ys):
            members = idx[order[bounds[k] : bounds[k + 1]]]
            b = min(int((y - self.ymin) / self.h), self.nb - 1)
            segs = self._seg[self._ptr[b] : self._ptr[b + 1]]
            a, e = self.start[segs], self.end[segs]
            up = (a.imag <= y) & (e.imag > y)
            down = (e.imag <= y) & (a.imag > y)
            cross = up | down
            if not cross.any():
                continue
            a, e = a[cross], e[cross]
            sign = np.where(up[cross], 1, -1)
            xint = a.real + (y - a.imag) * (e.real - a.real) / (e.imag - a.imag)
            srt = np.argsort(xint)
            xint, sign = xint[srt], sign[srt]
            # signed crossings strictly to the right of each query point
            tail = np.concatenate([np.cumsum(sign[::-1])[::-1], [0]])
            pos = np.searchsorted(xint, flat.real[members], side="right")
            res[members] = tail[pos]
        return out

    def nearest(self, points, k: int = 4, upper: float | None = None):
        """Distance to the polyline and the interpolated curve parameter.

        With ``upper`` set, points farther than ``upper`` from every vertex
        get distance ``inf`` and parameter ``nan``.
        """
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        flat = pts.ravel()
        n = len(self.vertices)
        k = min(k, n)
        xy = np.column_stack([flat.real, flat.imag])
        if upper is None:
            _, vi = self._tree.query(xy, k=k)
        else:
            _, vi = self._tree.query(xy, k=k, distance_upper_bound=upper + self.max_segment)
        vi = vi.reshape(len(flat), k)
        missing = vi[:, 0] >= n
        vi = np.where(vi >= n, vi[:, :1], vi)
        vi[missing] = 0
        segs = np.concatenate([vi, (vi - 1) % n], axis=1)
        a, e = self.start[segs], self.end[segs]
        ab = e - a
        L2 = np.abs(ab) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            t = ((flat[:, None] - a) * np.conj(ab)).real / L2
        t = np.clip(np.nan_to_num(t), 0.0, 1.0)
        dist = np.abs(flat[:, None] - (a + t * ab))
        j = dist.argmin(axis=1)
        rows = np.arange(len(flat))
        s = segs[rows, j]
        tt = t[rows, j]
        p0 = self.params[s]
        p1 = np.where(s == n - 1, self.params[0] + self._period(), self.params[(s + 1) % n])
        d_out = np.where(missing, np.inf, dist[rows, j])
        p_out = np.where(missing, np.nan, p0 + tt * (p1 - p0))
        return d_out.reshape(pts.shape), p_out.reshape(pts.shape)

    def _period(self) -> float:
        if len(self.params) < 2:
            return 0.0
        step = self.params[1] - self.params[0]
        return self.params[-1] + step - self.params[0]
