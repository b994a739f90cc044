"""Batch ingest: CSV parsing, saturated-thickness computation, store build.

The input schema is ``well_id,date,lat,lon,county,lsd,wl,bt`` with dates as
``YYYY-MM``. Malformed rows are rejected individually and reported; only a
missing header or an unreadable stream aborts the run. The resulting
WellStore is written to a data directory as a versioned snapshot so the
service can start without re-parsing raw files.
"""

from __future__ import annotations

import gzip
import io
import json
import math
import os
from csv import reader as csv_reader
from typing import Iterable, Iterator, TextIO

import numpy as np

from .model import (
    IngestReport,
    MeasurementSeries,
    ModelError,
    WellRecord,
    WellStore,
    format_month,
    month_index,
)

EXPECTED_HEADER = ["well_id", "date", "lat", "lon", "county", "lsd", "wl", "bt"]

SNAPSHOT_MAGIC = b"STOAV1\n"
SNAPSHOT_NAME = "snapshot.stoav"
REPORT_NAME = "ingest_report.json"


class IngestError(Exception):
    """Fatal ingest failure: bad header, unreadable stream, empty dataset."""


def compute_saturated_thickness(lsd: float, wl: float, bt: float) -> float:
    """Saturated thickness from land-surface elevation, depth to water,
    and aquifer-bottom elevation (all feet; wl measured below ground).

    The result may be negative; callers flag that, nothing is clamped here.
    """
    if not (math.isfinite(lsd) and math.isfinite(wl) and math.isfinite(bt)):
        raise IngestError("non-finite input to saturated thickness")
    return lsd - wl - bt


# Raw accepted row: (well_id, month, lat, lon, county, lsd, wl, bt)
RawRow = tuple[str, int, float, float, str, float, float, float]


def _parse_date(text: str, cache: dict[str, int]) -> int:
    got = cache.get(text)
    if got is not None:
        return got
    parts = text.split("-")
    if len(parts) != 2 or len(parts[0]) != 4 or len(parts[1]) != 2:
        raise ValueError(f"bad date {text!r}: expected YYYY-MM")
    year, month = int(parts[0]), int(parts[1])
    if not 1 <= month <= 12:
        raise ValueError("month out of range")
    idx = month_index(year, month)
    cache[text] = idx
    return idx


def iter_measurements(stream: TextIO, report: IngestReport) -> Iterator[RawRow]:
    """Stream accepted rows from a CSV, recording rejects in the report.

    Raises IngestError if the header line is missing or wrong.
    """
    rows = csv_reader(stream)
    try:
        header = next(rows)
    except StopIteration:
        raise IngestError("missing header: empty stream") from None
    except Exception as exc:
        raise IngestError(f"unreadable stream: {exc}") from None
    if [h.strip().lower() for h in header] != EXPECTED_HEADER:
        raise IngestError(
            f"missing or wrong header: expected {','.join(EXPECTED_HEADER)}")

    date_cache: dict[str, int] = {}
    for line_no, row in enumerate(rows, start=2):
        if not row:
            continue  # blank line, not a data row
        report.rows_read += 1
        if len(row) != len(EXPECTED_HEADER):
            report.reject(line_no, f"expected 8 fields, got {len(row)}")
            continue
        well_id = row[0].strip()
        county = row[4].strip()
        if not well_id:
            report.reject(line_no, "empty well_id")
            continue
        if not county:
            report.reject(line_no, "empty county")
            continue
        try:
            month = _parse_date(row[1].strip(), date_cache)
        except ValueError as exc:
            report.reject(line_no, str(exc))
            continue
        try:
            lat = float(row[2])
            lon = float(row[3])
            lsd = float(row[5])
            wl = float(row[6])
            bt = float(row[7])
        except ValueError:
            report.reject(line_no, "non-numeric field")
            continue
        if not all(map(math.isfinite, (lat, lon, lsd, wl, bt))):
            report.reject(line_no, "non-finite field")
            continue
        if not -90.0 <= lat <= 90.0:
            report.reject(line_no, f"lat out of range: {lat}")
            continue
        if not -180.0 <= lon <= 180.0:
            report.reject(line_no, f"lon out of range: {lon}")
            continue
        if lsd < bt:
            report.reject(line_no, f"lsd {lsd} below bt {bt}")
            continue
        report.rows_accepted += 1
        yield well_id, month, lat, lon, county, lsd, wl, bt


def parse_measurements(stream: TextIO) -> tuple[list[RawRow], IngestReport]:
    """Parse a whole CSV stream into accepted raw rows plus a report."""
    report = IngestReport()
    rows = list(iter_measurements(stream, report))
    report.check()
    return rows, report


def build_well_store(
    rows: Iterable[RawRow], report: IngestReport | None = None
) -> tuple[WellStore, IngestReport]:
    """Assemble rows into one record and one monthly series per well.

    Static fields come from the first occurrence of a well (later conflicts
    warn, first wins). Duplicate (well, month) measurements warn and the
    last row wins. Months never observed inside a well's own observed range
    become missing slots.
    """
    report = report if report is not None else IngestReport()
    records: dict[str, WellRecord] = {}
    points: dict[str, dict[int, float]] = {}

    for well_id, month, lat, lon, county, lsd, wl, bt in rows:
        rec = records.get(well_id)
        if rec is None:
            records[well_id] = rec = WellRecord(
                well_id=well_id, lat=lat, lon=lon, county=county,
                lsd=lsd, bt=bt)
            points[well_id] = {}
        else:
            if (lat, lon, county, lsd, bt) != (
                    rec.lat, rec.lon, rec.county, rec.lsd, rec.bt):
                report.warn(well_id, month,
                            "static fields differ from first occurrence")
        st = compute_saturated_thickness(rec.lsd, wl, rec.bt)
        if st < 0:
            report.warn(well_id, month, f"negative saturated thickness {st}")
        bucket = points[well_id]
        if month in bucket:
            report.warn(well_id, month, "duplicate measurement, last wins")
        bucket[month] = st

    if not records:
        raise IngestError("empty dataset: zero accepted rows")

    series: dict[str, MeasurementSeries] = {}
    for well_id, bucket in points.items():
        first, last = min(bucket), max(bucket)
        vals = np.full(last - first + 1, np.nan)
        for m, v in bucket.items():
            vals[m - first] = v
        series[well_id] = MeasurementSeries(well_id, first, vals)

    report.check()
    return WellStore(records, series), report


def open_measurement_file(path: str | os.PathLike) -> TextIO:
    """Open a measurement CSV, transparently decompressing ``*.gz``."""
    path = os.fspath(path)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def ingest_file(path: str | os.PathLike) -> tuple[WellStore, IngestReport]:
    """End-to-end ingest of one CSV file (streaming, single pass)."""
    report = IngestReport()
    try:
        stream = open_measurement_file(path)
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc}") from None
    with stream:
        store, report = build_well_store(
            iter_measurements(stream, report), report)
    return store, report


def save_snapshot(store: WellStore, data_dir: str | os.PathLike,
                  report: IngestReport | None = None) -> str:
    """Write the store (and optionally the report) into a data directory.

    The snapshot starts with a magic string so stale or foreign files are
    refused on load.
    """
    data_dir = os.fspath(data_dir)
    os.makedirs(data_dir, exist_ok=True)
    doc = {
        "wells": [
            {
                "well_id": rec.well_id,
                "lat": rec.lat,
                "lon": rec.lon,
                "county": rec.county,
                "lsd": rec.lsd,
                "bt": rec.bt,
                "start": store.series[wid].start,
                "values": store.series[wid].to_list(),
            }
            for wid, rec in store.records.items()
        ],
    }
    path = os.path.join(data_dir, SNAPSHOT_NAME)
    payload = json.dumps(doc, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(gzip.compress(payload, compresslevel=1))
    if report is not None:
        with open(os.path.join(data_dir, REPORT_NAME), "w",
                  encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
    return path


def load_snapshot(data_dir: str | os.PathLike) -> WellStore:
    """Load a store snapshot previously written by save_snapshot."""
    path = os.path.join(os.fspath(data_dir), SNAPSHOT_NAME)
    try:
        with open(path, "rb") as fh:
            magic = fh.read(len(SNAPSHOT_MAGIC))
            if magic != SNAPSHOT_MAGIC:
                raise IngestError(f"{path}: not a store snapshot")
            doc = json.loads(gzip.decompress(fh.read()))
    except OSError as exc:
        raise IngestError(f"cannot read snapshot: {exc}") from None
    records: dict[str, WellRecord] = {}
    series: dict[str, MeasurementSeries] = {}
    for w in doc["wells"]:
        wid = w["well_id"]
        records[wid] = WellRecord(
            well_id=wid, lat=w["lat"], lon=w["lon"], county=w["county"],
            lsd=w["lsd"], bt=w["bt"])
        vals = np.array(
            [np.nan if v is None else v for v in w["values"]], dtype=float)
        series[wid] = MeasurementSeries(wid, w["start"], vals)
    try:
        return WellStore(records, series)
    except ModelError as exc:
        raise IngestError(str(exc)) from None


def format_report(report: IngestReport, limit: int = 10) -> str:
    """Human-readable one-screen summary of an ingest run."""
    lines = [
        f"rows read:     {report.rows_read}",
        f"rows accepted: {report.rows_accepted}",
        f"rows rejected: {report.rows_rejected}",
        f"warnings:      {len(report.warnings)}",
    ]
    for n, reason in report.rejections[:limit]:
        lines.append(f"  reject line {n}: {reason}")
    if len(report.rejections) > limit:
        lines.append(f"  ... {len(report.rejections) - limit} more rejects")
    for wid, month, reason in report.warnings[:limit]:
        lines.append(f"  warn {wid} {format_month(month)}: {reason}")
    if len(report.warnings) > limit:
        lines.append(f"  ... {len(report.warnings) - limit} more warnings")
    return "\n".join(lines)
