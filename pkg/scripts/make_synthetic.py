#!/usr/bin/env python3
"""Generate a synthetic well-measurement CSV at any scale.

Wells are scattered over a Texas-panhandle-like box with county tiles,
smooth elevation fields, per-well water-level trends, seasonal wiggle,
and random gap patches, so the output exercises the same code paths as a
real export: gaps, negative thicknesses, county grouping, rankable trends.

Usage:
    python scripts/make_synthetic.py --wells 5200 --out wells.csv
"""

from __future__ import annotations

import argparse
import gzip
import sys

import numpy as np

COUNTIES = [
    "Hale", "Hartley", "Lubbock", "Castro", "Parmer", "Lamb",
    "Floyd", "Swisher", "Briscoe", "Bailey", "Deaf Smith", "Randall",
]

LAT_RANGE = (33.0, 36.5)
LON_RANGE = (-103.0, -100.5)


def county_name(lat: float, lon: float) -> str:
    r = int((lat - LAT_RANGE[0]) / (LAT_RANGE[1] - LAT_RANGE[0]) * 3.999)
    c = int((lon - LON_RANGE[0]) / (LON_RANGE[1] - LON_RANGE[0]) * 2.999)
    return COUNTIES[r * 3 + c]


def generate_rows(n_wells: int, months: int = 264, start_year: int = 1995,
                  seed: int = 0, gap_fraction: float = 0.3,
                  include_header: bool = True):
    """Yield CSV lines for n_wells wells over a monthly span."""
    rng = np.random.default_rng(seed)
    if include_header:
        yield "well_id,date,lat,lon,county,lsd,wl,bt"

    lats = rng.uniform(*LAT_RANGE, n_wells)
    lons = rng.uniform(*LON_RANGE, n_wells)
    # land surface rises gently westward, bottom follows with thickness
    lsd = (3200.0 + 250.0 * (LON_RANGE[1] - lons) / (LON_RANGE[1] - LON_RANGE[0])
           + rng.normal(0, 15, n_wells)).round(1)
    base_thickness = (60.0
                      + 340.0 * (lats - LAT_RANGE[0]) / (LAT_RANGE[1] - LAT_RANGE[0])
                      + rng.normal(0, 25, n_wells)).clip(10, 550)
    wl0 = rng.uniform(50, 200, n_wells)
    bt = (lsd - wl0 - base_thickness).round(1)
    trend = rng.normal(-1.5, 1.0, n_wells)          # feet/year, mostly declining
    seasonal_amp = rng.uniform(0, 3, n_wells)

    dates = [f"{start_year + m // 12:04d}-{m % 12 + 1:02d}"
             for m in range(months)]
    t = np.arange(months)
    season = np.sin(2 * np.pi * t / 12.0)

    for i in range(n_wells):
        wid = f"W{i + 1:05d}"
        wl = (wl0[i] - trend[i] * t / 12.0
              + seasonal_amp[i] * season
              + rng.normal(0, 1.0, months)).round(2)
        present = np.ones(months, dtype=bool)
        if rng.random() < gap_fraction:
            g0 = rng.integers(0, months - 1)
            g1 = min(months, g0 + int(rng.integers(1, 24)))
            present[g0:g1] = False
        lat = round(float(lats[i]), 5)
        lon = round(float(lons[i]), 5)
        county = county_name(lat, lon)
        prefix = f"{wid},"
        suffix = f",{lat},{lon},{county},{lsd[i]},"
        bt_s = f",{bt[i]}"
        for m in range(months):
            if present[m]:
                yield f"{prefix}{dates[m]}{suffix}{wl[m]}{bt_s}"


def write_csv(path: str, n_wells: int, months: int = 264,
              seed: int = 0, gap_fraction: float = 0.3) -> int:
    opener = gzip.open if path.endswith(".gz") else open
    n = 0
    with opener(path, "wt", encoding="utf-8") as fh:
        for line in generate_rows(n_wells, months=months, seed=seed,
                                  gap_fraction=gap_fraction):
            fh.write(line)
            fh.write("\n")
            n += 1
    return n - 1  # minus header


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wells", type=int, default=100)
    ap.add_argument("--months", type=int, default=264)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gap-fraction", type=float, default=0.3)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    rows = write_csv(args.out, args.wells, months=args.months,
                     seed=args.seed, gap_fraction=args.gap_fraction)
    print(f"wrote {rows} data rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
