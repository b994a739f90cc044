"""Command-line entry points: ingest, features, contours, rank, serve.

Exit codes: 0 success, 1 data error (bad input files, missing snapshot,
unwritable output), 2 usage error (bad flags; argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import features as ft
from . import ingest as ing
from . import spatial
from .config import ConfigError, load_config
from .contours import contour_bands_geojson, extract_contour_bands
from .model import ModelError, format_month, parse_month
from .spatial import EmptyGridError, SpatialError

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class DataError(Exception):
    pass


def _write_out(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}") from None


def cmd_ingest(args: argparse.Namespace) -> int:
    store, report = ing.ingest_file(args.csv)
    try:
        ing.save_snapshot(store, args.out, report)
    except OSError as exc:
        raise DataError(f"cannot write snapshot to {args.out}: {exc}") from None
    print(ing.format_report(report))
    print(f"wells: {len(store)}")
    return EXIT_OK


def cmd_features(args: argparse.Namespace) -> int:
    store = ing.load_snapshot(args.datadir)
    _write_out(ft.feature_table_csv(store), args.out)
    return EXIT_OK


def cmd_contours(args: argparse.Namespace) -> int:
    store = ing.load_snapshot(args.datadir)
    try:
        month = parse_month(args.month)
    except ModelError as exc:
        raise DataError(str(exc)) from None
    thresholds = [float(t) for t in args.thresholds.split(",")]
    try:
        grid = spatial.build_grid(store, month, cell_size=args.cell,
                                  power=args.power, radius=args.radius)
        bands = extract_contour_bands(grid, thresholds, refine=args.refine)
        geo = contour_bands_geojson(bands)
    except EmptyGridError:
        geo = {"type": "FeatureCollection", "features": []}
    except SpatialError as exc:
        raise DataError(str(exc)) from None
    _write_out(json.dumps(geo, separators=(",", ":")) + "\n", args.out)
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    store = ing.load_snapshot(args.datadir)
    feat = ft.RankFeature(args.feature)
    ranked = ft.rank_wells(store, feat, args.order, args.k)
    lines = ["well_id,value"]
    lines += [f"{w},{v!r}" for w, v in ranked]
    _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    cfg = load_config(args.config)
    cfg.data_dir = args.datadir
    if args.port is not None:
        cfg.port = args.port
    if args.host is not None:
        cfg.host = args.host
    store = ing.load_snapshot(cfg.data_dir)
    app = create_app(store, cfg)
    try:
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        raise DataError(f"server failed to start: {exc}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stoaviz",
        description="Aquifer saturated-thickness analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a measurement CSV into a "
                                      "store snapshot")
    p.add_argument("csv", help="input CSV (optionally .gz)")
    p.add_argument("--out", required=True, help="data directory to write")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="export the per-well feature table")
    p.add_argument("datadir")
    p.add_argument("--out", default="-", help="CSV path or - for stdout")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("contours", help="export contour bands as GeoJSON")
    p.add_argument("datadir")
    p.add_argument("--month", required=True, help="YYYY-MM")
    p.add_argument("--out", default="-", help="GeoJSON path or - for stdout")
    p.add_argument("--cell", type=float, default=spatial.DEFAULT_CELL_SIZE_DEG,
                   help="grid cell size in degrees")
    p.add_argument("--power", type=float, default=spatial.DEFAULT_POWER)
    p.add_argument("--radius", type=float, default=spatial.DEFAULT_RADIUS_KM,
                   help="interpolation search radius (km)")
    p.add_argument("--refine", type=int, default=0,
                   help="band-edge refinement factor (0 = auto)")
    p.add_argument("--thresholds",
                   default=",".join(str(t) for t in range(0, 601, 50)))
    p.set_defaults(func=cmd_contours)

    p = sub.add_parser("rank", help="rank wells by a time-series feature")
    p.add_argument("datadir")
    p.add_argument("--feature", required=True,
                   choices=[f.value for f in ft.RankFeature])
    p.add_argument("--order", default="desc", choices=["asc", "desc"])
    p.add_argument("-k", type=int, default=20)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("datadir")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--config", default=None, help="key=value config file")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, ing.IngestError, ConfigError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
