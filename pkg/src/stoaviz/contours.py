"""Isoband extraction: scalar grid -> per-threshold-interval polygon rings.

Marching-squares style: each grid cell (corners = the four surrounding
sample points) is split into four triangles around its center, the center
taking the bilinear (mean) value — this resolves saddle cells. On a
triangle the interpolated field is linear, so the band region
{lower <= f <= upper} clips to an exact polygon with straight edges.
Per-cell fragments are stitched by cancelling shared directed edges; the
surviving edges chain into closed rings, counterclockwise around filled
regions, which makes outer boundaries CCW and holes CW automatically.

Cells with any no-data corner are excluded from every band. An optional
refinement factor resamples each cell's bilinear surface onto a finer
lattice (exact: bilinear is closed under axis-aligned refinement), which
tightens the straight-segment approximation of the curved bilinear level
sets at a quadratic rate.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .model import format_month
from .spatial import Grid, SpatialError

Point = tuple[float, float]
Ring = list[Point]


@dataclass
class ContourBand:
    lower: float
    upper: float
    rings: list[Ring]  # (lon, lat) vertices; closed; CCW outer, CW hole


@dataclass
class ContourBandSet:
    month: int
    thresholds: list[float]
    bands: list[ContourBand]


def refine_lattice(values: np.ndarray, factor: int) -> np.ndarray:
    """Resample a lattice onto a factor-times-finer one, bilinearly.

    Values are interpolated rows-then-columns; original points are copied
    through untouched so no-data never bleeds across cell boundaries.
    """
    if factor < 1:
        raise SpatialError("refine factor must be >= 1")
    if factor == 1:
        return values
    nr, nc = values.shape
    k = factor
    R, C = (nr - 1) * k + 1, (nc - 1) * k + 1
    u = np.arange(1, k) / k

    rows = np.empty((nr, C))
    rows[:, ::k] = values
    interp = (values[:, :-1, None] * (1.0 - u)
              + values[:, 1:, None] * u)            # (nr, nc-1, k-1)
    col_idx = (np.arange(nc - 1)[:, None] * k
               + np.arange(1, k)[None, :]).ravel()
    rows[:, col_idx] = interp.reshape(nr, -1)

    out = np.empty((R, C))
    out[::k, :] = rows
    vinterp = (rows[:-1, None, :] * (1.0 - u)[None, :, None]
               + rows[1:, None, :] * u[None, :, None])  # (nr-1, k-1, C)
    row_idx = (np.arange(nr - 1)[:, None] * k
               + np.arange(1, k)[None, :]).ravel()
    out[row_idx, :] = vinterp.reshape(-1, C)
    return out


def _canonical_crossing(p: Point, vp: float, q: Point, vq: float,
                        level: float) -> Point:
    """Point where the linear field crosses `level` on segment p-q.

    Endpoints are ordered canonically first so the two triangles (or
    cells) sharing the segment compute bit-identical coordinates, which
    edge cancellation and ring chaining rely on.
    """
    if q < p:
        p, vp, q, vq = q, vq, p, vp
    s = (level - vp) / (vq - vp)
    return (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))


def _clip(points: list[Point], vals: list[float], level: float,
          keep_ge: bool) -> tuple[list[Point], list[float]]:
    """Sutherland-Hodgman clip of a polygon against f >= / <= level."""
    out_p: list[Point] = []
    out_v: list[float] = []
    n = len(points)
    for i in range(n):
        p, vp = points[i], vals[i]
        q, vq = points[(i + 1) % n], vals[(i + 1) % n]
        p_in = (vp >= level) if keep_ge else (vp <= level)
        q_in = (vq >= level) if keep_ge else (vq <= level)
        if p_in:
            out_p.append(p)
            out_v.append(vp)
        if p_in != q_in:
            out_p.append(_canonical_crossing(p, vp, q, vq, level))
            out_v.append(level)
    return out_p, out_v


def _dedupe(points: list[Point], vals: list[float]) -> tuple[list[Point], list[float]]:
    out_p: list[Point] = []
    out_v: list[float] = []
    for p, v in zip(points, vals):
        if not out_p or p != out_p[-1]:
            out_p.append(p)
            out_v.append(v)
    if len(out_p) > 1 and out_p[0] == out_p[-1]:
        out_p.pop()
        out_v.pop()
    return out_p, out_v


class _EdgePool:
    """Directed-edge multiset where opposite edges annihilate."""

    def __init__(self) -> None:
        self.edges: Counter = Counter()

    def emit(self, p: Point, q: Point) -> None:
        if p == q:
            return
        rev = (q, p)
        if self.edges[rev] > 0:
            self.edges[rev] -= 1
            if self.edges[rev] == 0:
                del self.edges[rev]
        else:
            self.edges[(p, q)] += 1

    def emit_polygon(self, points: list[Point]) -> None:
        n = len(points)
        for i in range(n):
            self.emit(points[i], points[(i + 1) % n])


def _leftmost_turn(prev: Point, cur: Point, cands: list[Point]) -> Point:
    """Pick the outgoing vertex turning most sharply left, keeping rings
    simple at pinch vertices."""
    dx, dy = cur[0] - prev[0], cur[1] - prev[1]
    best = None
    best_key = None
    for q in cands:
        ex, ey = q[0] - cur[0], q[1] - cur[1]
        ang = math.atan2(dx * ey - dy * ex, dx * ex + dy * ey)
        if abs(ang) >= math.pi - 1e-12:  # straight back: worst choice
            ang = -math.pi
        key = (-ang, q)
        if best_key is None or key < best_key:
            best_key = key
            best = q
    return best  # type: ignore[return-value]


def _chain_rings(pool: _EdgePool) -> list[list[Point]]:
    outgoing: dict[Point, list[Point]] = {}
    for (p, q), cnt in pool.edges.items():
        outgoing.setdefault(p, []).extend([q] * cnt)
    for lst in outgoing.values():
        lst.sort()
    rings: list[list[Point]] = []
    for start in sorted(outgoing):
        while outgoing.get(start):
            ring = [start]
            prev: Point | None = None
            cur = start
            broken = False
            while True:
                cands = outgoing.get(cur)
                if not cands:
                    broken = True
                    break
                if prev is None or len(cands) == 1:
                    nxt = cands.pop(0)
                else:
                    nxt = _leftmost_turn(prev, cur, cands)
                    cands.remove(nxt)
                ring.append(nxt)
                prev, cur = cur, nxt
                if cur == start:
                    break
            if not broken and len(ring) >= 4:
                rings.append(ring)
    return rings


def _merge_collinear(ring: list[Point]) -> list[Point]:
    """Drop interior vertices of exactly-collinear same-direction runs.

    The input ring is closed (first == last); so is the output.
    """
    pts = ring[:-1]
    n = len(pts)
    keep = []
    for i in range(n):
        p = pts[i - 1]
        q = pts[i]
        r = pts[(i + 1) % n]
        ax, ay = q[0] - p[0], q[1] - p[1]
        bx, by = r[0] - q[0], r[1] - q[1]
        if ax * by - ay * bx == 0.0 and ax * bx + ay * by > 0.0:
            continue
        keep.append(q)
    if len(keep) < 3:
        return []
    keep.append(keep[0])
    return keep


def ring_area(ring: list[Point]) -> float:
    """Signed shoelace area; positive = counterclockwise."""
    a = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        a += x0 * y1 - x1 * y0
    return a / 2.0


def _band_rings(W: np.ndarray, lo: float, hi: float) -> list[list[Point]]:
    """Rings (lattice coordinates) of the region {lo <= f <= hi}."""
    fin = np.isfinite(W)
    v00, v10 = W[:-1, :-1], W[:-1, 1:]
    v01, v11 = W[1:, :-1], W[1:, 1:]
    valid = fin[:-1, :-1] & fin[:-1, 1:] & fin[1:, :-1] & fin[1:, 1:]
    cin = (W >= lo) & (W <= hi)
    full = cin[:-1, :-1] & cin[:-1, 1:] & cin[1:, :-1] & cin[1:, 1:]
    with np.errstate(invalid="ignore"):
        cmin = np.minimum(np.minimum(v00, v10), np.minimum(v01, v11))
        cmax = np.maximum(np.maximum(v00, v10), np.maximum(v01, v11))
        partial = valid & ~full & (cmin <= hi) & (cmax >= lo)

    pool = _EdgePool()

    # Full cells: boundary edges only, CCW around the filled region.
    Fp = np.pad(full, 1, constant_values=False)
    for mask, mk_edge in (
        (full & ~Fp[:-2, 1:-1],          # bottom neighbor not full
         lambda x, y: ((x, y), (x + 1.0, y))),
        (full & ~Fp[1:-1, 2:],           # right
         lambda x, y: ((x + 1.0, y), (x + 1.0, y + 1.0))),
        (full & ~Fp[2:, 1:-1],           # top
         lambda x, y: ((x + 1.0, y + 1.0), (x, y + 1.0))),
        (full & ~Fp[1:-1, :-2],          # left
         lambda x, y: ((x, y + 1.0), (x, y))),
    ):
        rs, cs = np.nonzero(mask)
        for r, c in zip(rs.tolist(), cs.tolist()):
            p, q = mk_edge(float(c), float(r))
            pool.emit(p, q)

    # Partial cells: clip the four center triangles against both levels.
    rs, cs = np.nonzero(partial)
    for r, c in zip(rs.tolist(), cs.tolist()):
        x, y = float(c), float(r)
        a, b = float(W[r, c]), float(W[r, c + 1])
        cc, d = float(W[r + 1, c]), float(W[r + 1, c + 1])
        m = (a + b + cc + d) / 4.0
        p00, p10 = (x, y), (x + 1.0, y)
        p01, p11 = (x, y + 1.0), (x + 1.0, y + 1.0)
        ctr = (x + 0.5, y + 0.5)
        for tri_p, tri_v in (
            ([p00, p10, ctr], [a, b, m]),
            ([p10, p11, ctr], [b, d, m]),
            ([p11, p01, ctr], [d, cc, m]),
            ([p01, p00, ctr], [cc, a, m]),
        ):
            pts, vals = _clip(tri_p, tri_v, lo, keep_ge=True)
            if len(pts) < 3:
                continue
            pts, vals = _clip(pts, vals, hi, keep_ge=False)
            pts, _ = _dedupe(pts, vals)
            if len(pts) >= 3:
                pool.emit_polygon(pts)

    rings = []
    for ring in _chain_rings(pool):
        merged = _merge_collinear(ring)
        if merged and ring_area(merged) != 0.0:
            rings.append(merged)
    return rings


MAX_AUTO_REFINE = 4
AUTO_REFINE_TARGET = 32  # aim the refined lattice at roughly this many steps


def auto_refine(n_rows: int, n_cols: int) -> int:
    """Refinement factor for a lattice: coarse grids get subdivided so the
    straight-segment rendering of curved band edges stays faithful; dense
    grids already resolve the field and take factor 1."""
    steps = max(n_rows, n_cols) - 1
    return max(1, min(MAX_AUTO_REFINE, -(-AUTO_REFINE_TARGET // steps)))


def extract_contour_bands(grid: Grid, thresholds: list[float],
                          refine: int = 0) -> ContourBandSet:
    """Extract isoband polygons between consecutive thresholds.

    Output ring coordinates are (lon, lat) at the grid's sample points
    (cell centers). A fully no-data grid yields empty bands. refine=0
    picks a factor from the grid size (see auto_refine).
    """
    thresholds = [float(t) for t in thresholds]
    if len(thresholds) < 2:
        raise SpatialError("need at least two thresholds")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise SpatialError("thresholds must be strictly ascending")
    if refine == 0:
        refine = auto_refine(grid.n_rows, grid.n_cols)

    W = refine_lattice(grid.values, refine)
    k = float(refine)
    lon0 = grid.lon_min + 0.5 * grid.cell_lon
    lat0 = grid.lat_min + 0.5 * grid.cell_lat
    sx = grid.cell_lon
    sy = grid.cell_lat

    bands = []
    for lo, hi in zip(thresholds, thresholds[1:]):
        rings = [
            [(lon0 + (x / k) * sx, lat0 + (y / k) * sy) for x, y in ring]
            for ring in _band_rings(W, lo, hi)
        ]
        bands.append(ContourBand(lower=lo, upper=hi, rings=rings))
    return ContourBandSet(month=grid.month, thresholds=thresholds,
                          bands=bands)


def _point_in_ring(x: float, y: float, ring: list[Point]) -> bool:
    inside = False
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) / (y1 - y0) * (x1 - x0)
            if x < xc:
                inside = not inside
    return inside


def _group_rings(rings: list[Ring]) -> list[list[Ring]]:
    """Nest rings into GeoJSON polygons: each CW hole goes inside the
    smallest CCW outer that contains it."""
    outers = [(abs(ring_area(r)), r) for r in rings if ring_area(r) > 0]
    holes = [r for r in rings if ring_area(r) < 0]
    outers.sort(key=lambda t: t[0])
    polys: list[list[Ring]] = [[r] for _, r in outers]
    for hole in holes:
        # representative point just inside the hole at a convex corner
        i = min(range(len(hole) - 1), key=lambda j: hole[j])
        p, a, b = hole[i], hole[i - 1 if i else -2], hole[i + 1]
        eps = 1e-7
        rx = p[0] + eps * ((a[0] - p[0]) + (b[0] - p[0]))
        ry = p[1] + eps * ((a[1] - p[1]) + (b[1] - p[1]))
        for j, (_, outer) in enumerate(outers):
            if _point_in_ring(rx, ry, outer):
                polys[j].append(hole)
                break
    return polys


def contour_bands_geojson(bandset: ContourBandSet) -> dict:
    """GeoJSON FeatureCollection: one MultiPolygon Feature per non-empty
    band with lower/upper/month properties."""
    features = []
    for band in bandset.bands:
        if not band.rings:
            continue
        polys = _group_rings(band.rings)
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "MultiPolygon",
                "coordinates": [
                    [[list(pt) for pt in ring] for ring in poly]
                    for poly in polys
                ],
            },
            "properties": {
                "lower": band.lower,
                "upper": band.upper,
                "month": format_month(bandset.month),
            },
        })
    return {"type": "FeatureCollection", "features": features}
