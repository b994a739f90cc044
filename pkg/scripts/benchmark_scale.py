#!/usr/bin/env python3
"""Full-scale benchmark: ingest speed, memory, grid + contour latency.

Generates a 5,200-well x 264-month CSV (~1.35M rows), ingests it, builds
a 200-row interpolation grid for one month, and extracts contour bands,
printing wall times and peak RSS.
"""

from __future__ import annotations

import argparse
import resource
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_synthetic import write_csv

from stoaviz.contours import extract_contour_bands
from stoaviz.ingest import ingest_file, save_snapshot
from stoaviz.model import parse_month
from stoaviz.spatial import build_grid


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wells", type=int, default=5200)
    ap.add_argument("--months", type=int, default=264)
    ap.add_argument("--month", default="2013-06")
    ap.add_argument("--keep", help="write the snapshot to this directory")
    args = ap.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        csv_path = str(Path(tmp) / "scale.csv")
        t0 = time.perf_counter()
        rows = write_csv(csv_path, args.wells, months=args.months, seed=6)
        print(f"generate: {rows} rows in {time.perf_counter() - t0:.1f}s")

        t0 = time.perf_counter()
        store, report = ingest_file(csv_path)
        print(f"ingest:   {time.perf_counter() - t0:.1f}s "
              f"({report.rows_accepted} rows, {len(store)} wells, "
              f"{len(report.warnings)} warnings)")

        t0 = time.perf_counter()
        grid = build_grid(store, parse_month(args.month),
                          bounds=(33.0, 36.5, -103.0, -100.5),
                          cell_size=0.0175)
        bands = extract_contour_bands(
            grid, [float(t) for t in range(0, 601, 50)])
        n_rings = sum(len(b.rings) for b in bands.bands)
        print(f"grid+contours: {grid.n_rows}x{grid.n_cols} cells, "
              f"{n_rings} rings in {time.perf_counter() - t0:.1f}s")

        if args.keep:
            t0 = time.perf_counter()
            save_snapshot(store, args.keep, report)
            print(f"snapshot: {args.keep} in {time.perf_counter() - t0:.1f}s")

    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1e6
    print(f"peak RSS: {peak_gb:.2f} GB")
    return 0


if __name__ == "__main__":
    sys.exit(main())
