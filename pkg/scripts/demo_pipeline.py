#!/usr/bin/env python3
"""End-to-end demo on a small synthetic dataset.

Synthesizes wells, ingests them, prints the cleansing report, the top
water-loss ranking, one well's comparison against its county average,
and writes contour bands plus an ESRI ASCII raster into --out.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_synthetic import write_csv

from stoaviz import features as ft
from stoaviz.contours import contour_bands_geojson, extract_contour_bands
from stoaviz.ingest import format_report, ingest_file, save_snapshot
from stoaviz.model import format_month, parse_month
from stoaviz.spatial import build_grid, write_esri_ascii


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wells", type=int, default=300)
    ap.add_argument("--month", default="2013-06")
    ap.add_argument("--out", default="demo_out")
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        csv_path = str(Path(tmp) / "wells.csv")
        write_csv(csv_path, args.wells, seed=1)
        store, report = ingest_file(csv_path)

    print("== ingest ==")
    print(format_report(report, limit=3))
    save_snapshot(store, out / "data", report)

    print("\n== top monthly drops ==")
    for wid, value in ft.rank_wells(store, ft.RankFeature.MAX_DROP, "desc", 5):
        fv = ft.feature_table(store)[wid]
        when = (format_month(fv.max_monthly_drop_month)
                if fv.max_monthly_drop_month is not None else "-")
        print(f"  {wid}  lost {value:7.2f} ft in {when}")

    focus = ft.rank_wells(store, ft.RankFeature.MAX_DROP, "desc", 1)[0][0]
    cmp_series = ft.county_comparison(store, focus)
    above = sum(1 for e in cmp_series.entries
                if e and e.band is ft.BandClass.ABOVE)
    below = sum(1 for e in cmp_series.entries
                if e and e.band is ft.BandClass.BELOW)
    print(f"\n== {focus} vs {cmp_series.reference_label} county average ==")
    print(f"  months above: {above}, below: {below}")

    month = parse_month(args.month)
    grid = build_grid(store, month)
    bands = extract_contour_bands(grid, [float(t) for t in range(0, 601, 50)])
    geo = contour_bands_geojson(bands)
    (out / "bands.geojson").write_text(json.dumps(geo))
    (out / "grid.asc").write_text(write_esri_ascii(grid))
    print(f"\n== spatial ==")
    print(f"  grid {grid.n_rows}x{grid.n_cols} -> {out}/grid.asc")
    print(f"  {len(geo['features'])} contour bands -> {out}/bands.geojson")
    print(f"\nserve it:  stoaviz serve {out}/data --port 8080")
    return 0


if __name__ == "__main__":
    sys.exit(main())
