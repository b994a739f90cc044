"""Shared test-side geometry oracles, independent of the contour engine."""

import numpy as np


def bilinear_on_lattice(values, xs, ys):
    """Direct bilinear interpolation of a lattice at (col, row) coords."""
    c0 = np.clip(np.floor(xs).astype(int), 0, values.shape[1] - 2)
    r0 = np.clip(np.floor(ys).astype(int), 0, values.shape[0] - 2)
    u = xs - c0
    w = ys - r0
    return (values[r0, c0] * (1 - u) * (1 - w)
            + values[r0, c0 + 1] * u * (1 - w)
            + values[r0 + 1, c0] * (1 - u) * w
            + values[r0 + 1, c0 + 1] * u * w)


def band_of(values, thresholds):
    """Band index for each value; -1 when outside [t0, t_last]."""
    T = np.asarray(thresholds, dtype=float)
    idx = np.clip(np.searchsorted(T, values, side="right") - 1, 0, len(T) - 2)
    out = np.where((values < T[0]) | (values > T[-1]), -1, idx)
    return out


class RingMembership:
    """Even-odd ray-casting membership test over a set of closed rings,
    with edges bucketed by y for speed."""

    def __init__(self, rings, n_bins=64):
        segs = []
        for ring in rings:
            a = np.asarray(ring, dtype=float)
            if len(a) >= 2:
                segs.append(np.column_stack([a[:-1], a[1:]]))
        if not segs:
            self.edges = None
            return
        e = np.concatenate(segs)
        self.x0, self.y0, self.x1, self.y1 = e[:, 0], e[:, 1], e[:, 2], e[:, 3]
        ymin = np.minimum(self.y0, self.y1)
        ymax = np.maximum(self.y0, self.y1)
        lo = min(ymin.min(), 0.0)
        hi = max(ymax.max(), 1.0)
        self.bin_lo = lo
        self.bin_w = (hi - lo) / n_bins or 1.0
        self.n_bins = n_bins
        first = np.clip(((ymin - lo) / self.bin_w).astype(int), 0, n_bins - 1)
        last = np.clip(((ymax - lo) / self.bin_w).astype(int), 0, n_bins - 1)
        self.bins = [[] for _ in range(n_bins)]
        for i in range(len(e)):
            for b in range(first[i], last[i] + 1):
                self.bins[b].append(i)
        self.bins = [np.array(b, dtype=int) for b in self.bins]
        self.edges = e

    def contains(self, px, py):
        px = np.asarray(px, dtype=float)
        py = np.asarray(py, dtype=float)
        out = np.zeros(px.size, dtype=bool)
        if self.edges is None:
            return out
        bin_ids = np.clip(((py - self.bin_lo) / self.bin_w).astype(int),
                          0, self.n_bins - 1)
        for b in range(self.n_bins):
            pts = np.nonzero(bin_ids == b)[0]
            idx = self.bins[b]
            if pts.size == 0 or idx.size == 0:
                continue
            x0, y0 = self.x0[idx][None, :], self.y0[idx][None, :]
            x1, y1 = self.x1[idx][None, :], self.y1[idx][None, :]
            X = px[pts][:, None]
            Y = py[pts][:, None]
            straddle = (y0 > Y) != (y1 > Y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xc = x0 + (Y - y0) / (y1 - y0) * (x1 - x0)
            hits = straddle & (X < xc)
            out[pts] = (hits.sum(axis=1) % 2).astype(bool)
        return out


def classify_points(bandset, px, py):
    """Band index claimed by the extracted polygons for each point
    (-1 = none). Also returns the number of bands claiming each point."""
    member = np.full(np.asarray(px).size, -1)
    claims = np.zeros(np.asarray(px).size, dtype=int)
    for i, band in enumerate(bandset.bands):
        tester = RingMembership(band.rings)
        inside = tester.contains(px, py)
        claims += inside
        member[inside & (member == -1)] = i
    return member, claims
