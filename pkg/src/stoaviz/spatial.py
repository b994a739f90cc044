"""Spatial core: local projection, inverse-distance interpolation, grids.

Coordinates are projected onto a local equirectangular plane (km) around a
fixed origin; at panhandle extents (~500 km) this stays well under 0.5%
distance error, so no full geodesy is needed. Interpolation is inverse
distance weighting with a hard search radius: deterministic, no fitting,
and interpolated values can never leave the range of the contributing
samples, which keeps contour legends honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import WellStore

KM_PER_DEG_LAT = 110.574
KM_PER_DEG_LON_EQ = 111.320

DEFAULT_POWER = 2.0
DEFAULT_RADIUS_KM = 50.0
DEFAULT_CELL_SIZE_DEG = 0.05
SNAP_DISTANCE_KM = 1e-9  # queries this close to a sample return it exactly

NODATA = -9999.0


class SpatialError(ValueError):
    pass


class EmptyGridError(SpatialError):
    """No well has a present value for the requested month."""


@dataclass(frozen=True)
class PlanarPoint:
    x: float  # km east of origin
    y: float  # km north of origin


def project(lat: float, lon: float, origin_lat: float,
            origin_lon: float) -> PlanarPoint:
    """Equirectangular projection to km offsets from an origin."""
    x = (lon - origin_lon) * KM_PER_DEG_LON_EQ * math.cos(
        math.radians(origin_lat))
    y = (lat - origin_lat) * KM_PER_DEG_LAT
    return PlanarPoint(x, y)


def idw_interpolate(samples: Sequence[tuple[PlanarPoint, float]],
                    query: PlanarPoint,
                    power: float = DEFAULT_POWER,
                    radius: float = DEFAULT_RADIUS_KM) -> Optional[float]:
    """Inverse-distance-weighted value at a query point.

    Only samples within the radius contribute; with none in range the
    result is None (no-data, not an error). A sample within the snap
    distance is returned exactly, avoiding the 1/0 singularity.
    """
    if power <= 0:
        raise SpatialError("power must be positive")
    if radius <= 0:
        raise SpatialError("radius must be positive")
    best_d = math.inf
    best_v: Optional[float] = None
    num = 0.0
    den = 0.0
    for pt, v in samples:
        d = math.hypot(pt.x - query.x, pt.y - query.y)
        if d > radius:
            continue
        if d <= SNAP_DISTANCE_KM:
            if d < best_d:
                best_d = d
                best_v = v
            continue
        w = d ** -power
        num += w * v
        den += w
    if best_v is not None:
        return best_v
    if den == 0.0:
        return None
    return num / den


@dataclass
class Grid:
    """Regular lat/lon raster of interpolated values for one month.

    ``values[r, c]`` sits at the center of cell (r, c):
    lat = lat_min + (r + 0.5) * cell_size, lon analogous. NaN means
    no-data (no sample within the search radius).
    """

    month: int
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float
    n_rows: int
    n_cols: int
    values: np.ndarray  # (n_rows, n_cols) float64, NaN = no-data

    def __post_init__(self) -> None:
        if self.n_rows < 2 or self.n_cols < 2:
            raise SpatialError("grid needs at least 2 rows and 2 cols")
        if self.values.shape != (self.n_rows, self.n_cols):
            raise SpatialError("values shape does not match grid dims")

    @property
    def cell_lat(self) -> float:
        return (self.lat_max - self.lat_min) / self.n_rows

    @property
    def cell_lon(self) -> float:
        return (self.lon_max - self.lon_min) / self.n_cols

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(lats, lons) of cell centers along each axis."""
        lats = self.lat_min + (np.arange(self.n_rows) + 0.5) * self.cell_lat
        lons = self.lon_min + (np.arange(self.n_cols) + 0.5) * self.cell_lon
        return lats, lons


def month_samples(store: WellStore, month: int) -> list[tuple[str, float, float, float]]:
    """(well_id, lat, lon, value) for wells with a present value at month."""
    out = []
    for wid in store.well_ids:
        v = store.series[wid].value_at(month)
        if v is not None:
            rec = store.records[wid]
            out.append((wid, rec.lat, rec.lon, v))
    return out


def annual_mean_samples(store: WellStore, year: int) -> list[tuple[str, float, float, float]]:
    """Per-well mean over one calendar year, for annual overview grids."""
    start = year * 12
    out = []
    for wid in store.well_ids:
        s = store.series[wid]
        vals = [v for m in range(start, start + 12)
                if (v := s.value_at(m)) is not None]
        if vals:
            rec = store.records[wid]
            out.append((wid, rec.lat, rec.lon, float(np.mean(vals))))
    return out


def _idw_grid(cell_x: np.ndarray, cell_y: np.ndarray,
              sample_x: np.ndarray, sample_y: np.ndarray,
              sample_v: np.ndarray, power: float, radius: float) -> np.ndarray:
    """Vectorized IDW over one grid: rows share a y, so samples are
    prefiltered per row by their y distance before the pairwise pass.

    Matches idw_interpolate semantics cell by cell: hard radius, snap to a
    coincident sample, positive-weight average otherwise. Samples keep
    their canonical order inside every sum, so the output is independent
    of how wells were ingested.
    """
    n_rows, n_cols = cell_y.size, cell_x.size
    out = np.full((n_rows, n_cols), np.nan)
    r2 = radius * radius
    snap2 = SNAP_DISTANCE_KM * SNAP_DISTANCE_KM
    order = np.argsort(sample_y, kind="stable")
    sy = sample_y[order]
    sx = sample_x[order]
    sv = sample_v[order]
    for r in range(n_rows):
        y = cell_y[r]
        lo = np.searchsorted(sy, y - radius, side="left")
        hi = np.searchsorted(sy, y + radius, side="right")
        if lo == hi:
            continue
        dy2 = (sy[lo:hi] - y) ** 2
        dx = cell_x[:, None] - sx[None, lo:hi]
        d2 = dx * dx
        d2 += dy2[None, :]
        if power == 2.0:
            w = 1.0 / np.maximum(d2, snap2)
        else:
            w = np.maximum(d2, snap2) ** (-power / 2.0)
        w[d2 > r2] = 0.0
        den = w.sum(axis=1)
        num = w @ sv[lo:hi]
        ok = den > 0
        vals = np.full(n_cols, np.nan)
        vals[ok] = num[ok] / den[ok]
        # snap rule: a cell essentially on top of a sample takes its value
        d2min = d2.min(axis=1)
        for c in np.nonzero(d2min <= snap2)[0]:
            cols = np.nonzero(d2[c] <= snap2)[0]
            vals[c] = sv[lo + cols[np.argmin(d2[c, cols])]]
        out[r] = vals
    return out


def build_grid(store: WellStore, month: int,
               bounds: Optional[tuple[float, float, float, float]] = None,
               cell_size: float = DEFAULT_CELL_SIZE_DEG,
               power: float = DEFAULT_POWER,
               radius: float = DEFAULT_RADIUS_KM,
               samples: Optional[list[tuple[str, float, float, float]]] = None) -> Grid:
    """Interpolate one month of well values onto a regular lat/lon grid.

    bounds is (lat_min, lat_max, lon_min, lon_max); by default the store's
    well bounding box padded by one cell. The east/north edges are snapped
    up so cells are exactly cell_size square. Wells outside the bounds
    still contribute wherever they fall within the search radius.
    """
    if cell_size <= 0:
        raise SpatialError("cell_size must be positive")
    if samples is None:
        samples = month_samples(store, month)
    if not samples:
        raise EmptyGridError(f"no well has data for month {month}")

    if bounds is None:
        lats = [rec.lat for rec in store.records.values()]
        lons = [rec.lon for rec in store.records.values()]
        bounds = (min(lats) - cell_size, max(lats) + cell_size,
                  min(lons) - cell_size, max(lons) + cell_size)
    lat_min, lat_max, lon_min, lon_max = bounds
    if not (lat_max > lat_min and lon_max > lon_min):
        raise SpatialError("degenerate bounds")

    n_rows = max(2, math.ceil(round((lat_max - lat_min) / cell_size, 9)))
    n_cols = max(2, math.ceil(round((lon_max - lon_min) / cell_size, 9)))
    lat_max = lat_min + n_rows * cell_size
    lon_max = lon_min + n_cols * cell_size

    origin_lat = (lat_min + lat_max) / 2.0
    origin_lon = (lon_min + lon_max) / 2.0
    kx = KM_PER_DEG_LON_EQ * math.cos(math.radians(origin_lat))
    ky = KM_PER_DEG_LAT

    sample_x = np.array([(lon - origin_lon) * kx for _, _, lon, _ in samples])
    sample_y = np.array([(lat - origin_lat) * ky for _, lat, _, _ in samples])
    sample_v = np.array([v for _, _, _, v in samples])

    cell_lats = lat_min + (np.arange(n_rows) + 0.5) * cell_size
    cell_lons = lon_min + (np.arange(n_cols) + 0.5) * cell_size
    gy = (cell_lats - origin_lat) * ky
    gx = (cell_lons - origin_lon) * kx

    vals = _idw_grid(gx, gy, sample_x, sample_y, sample_v, power, radius)
    return Grid(month=month, lat_min=lat_min, lat_max=lat_max,
                lon_min=lon_min, lon_max=lon_max,
                n_rows=n_rows, n_cols=n_cols, values=vals)


def store_projection(store: WellStore) -> dict[str, PlanarPoint]:
    """All wells projected into one shared frame (origin at the centroid),
    so pairwise distances are symmetric."""
    origin_lat = float(np.mean([r.lat for r in store.records.values()]))
    origin_lon = float(np.mean([r.lon for r in store.records.values()]))
    return {
        wid: project(rec.lat, rec.lon, origin_lat, origin_lon)
        for wid, rec in store.records.items()
    }


def neighbors(store: WellStore, well_id: str,
              radius: float = 10.0) -> list[str]:
    """Wells within radius km of the given well, nearest first, self
    excluded; distance ties break by well id."""
    if well_id not in store:
        raise KeyError(f"unknown well {well_id!r}")
    pts = store_projection(store)
    me = pts[well_id]
    found = []
    for wid, pt in pts.items():
        if wid == well_id:
            continue
        d = math.hypot(pt.x - me.x, pt.y - me.y)
        if d <= radius:
            found.append((d, wid))
    found.sort()
    return [wid for _, wid in found]


def wells_in_county(store: WellStore, county: str) -> list[str]:
    """Wells whose county matches case-insensitively, sorted by id."""
    return list(store.county_wells(county))


def write_esri_ascii(grid: Grid) -> str:
    """Serialize a grid as an ESRI ASCII raster (north row first)."""
    cell_lat = grid.cell_lat
    cell_lon = grid.cell_lon
    if abs(cell_lat - cell_lon) > 1e-9 * max(cell_lat, cell_lon):
        raise SpatialError("ESRI ASCII needs square cells")
    lines = [
        f"ncols {grid.n_cols}",
        f"nrows {grid.n_rows}",
        f"xllcorner {grid.lon_min!r}",
        f"yllcorner {grid.lat_min!r}",
        f"cellsize {cell_lon!r}",
        f"NODATA_value {NODATA!r}",
    ]
    for r in range(grid.n_rows - 1, -1, -1):
        row = grid.values[r]
        lines.append(" ".join(
            repr(NODATA) if math.isnan(v) else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_esri_ascii(text: str, month: int = 0) -> Grid:
    """Parse an ESRI ASCII raster produced by write_esri_ascii."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header: dict[str, float] = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if len(parts) == 2 and parts[0].lower() in (
                "ncols", "nrows", "xllcorner", "yllcorner", "cellsize",
                "nodata_value"):
            header[parts[0].lower()] = float(parts[1])
            i += 1
        else:
            break
    for key in ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize"):
        if key not in header:
            raise SpatialError(f"ESRI ASCII header missing {key}")
    n_cols = int(header["ncols"])
    n_rows = int(header["nrows"])
    nodata = header.get("nodata_value", NODATA)
    rows = []
    for ln in lines[i:]:
        rows.append([float(tok) for tok in ln.split()])
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise SpatialError("ESRI ASCII body does not match header dims")
    values = np.array(rows[::-1], dtype=float)  # back to south-first rows
    values[values == nodata] = np.nan
    cell = header["cellsize"]
    return Grid(
        month=month,
        lat_min=header["yllcorner"],
        lat_max=header["yllcorner"] + n_rows * cell,
        lon_min=header["xllcorner"],
        lon_max=header["xllcorner"] + n_cols * cell,
        n_rows=n_rows, n_cols=n_cols, values=values)
