"""Per-well time-series features, rankings, aggregates, and chart transforms.

Everything here is a pure function over an immutable store or a single
series, so callers may parallelize across wells freely. Consecutive-month
logic (drops, rises, anomaly deltas) only pairs months that are truly
adjacent in the calendar; a gap breaks adjacency because the loss cannot
be attributed to one month.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .model import MeasurementSeries, WellStore, format_month

COMPARISON_EPSILON = 1e-9  # feet; dead zone for the ABOVE/BELOW split


class FeatureError(ValueError):
    """A feature is undefined for the given series (e.g. too few points)."""


class NotFoundError(KeyError):
    """Unknown well or county."""


class RankFeature(Enum):
    AVERAGE = "average"
    STD_DEV = "std_dev"
    MAX_DROP = "max_drop"
    MAX_RISE = "max_rise"
    TREND = "trend"
    MISSING = "missing"


class BandClass(Enum):
    ABOVE = "ABOVE"
    BELOW = "BELOW"
    EQUAL = "EQUAL"


@dataclass(frozen=True)
class FeatureVector:
    """Scalar summaries of one well's series."""

    well_id: str
    average: float
    std_dev: float
    max_monthly_drop: float
    max_monthly_drop_month: Optional[int]
    max_monthly_rise: float
    max_monthly_rise_month: Optional[int]
    trend_slope: Optional[float]  # feet/year; None with <2 present months
    missing_count: int
    anomaly_count: int


@dataclass(frozen=True)
class ComparisonEntry:
    well_value: float
    reference_value: float
    delta: float
    band: BandClass


@dataclass
class ComparisonSeries:
    """Monthly well-vs-reference deltas, classified for bipolar coloring."""

    well_id: str
    reference_label: str
    start: int
    entries: list[Optional[ComparisonEntry]]


@dataclass
class HorizonBandSeries:
    """Series split into uniform value bands for horizon rendering.

    Each present slot carries (band_index, residual); the top band clamps
    so one shared interval can serve every well. Negative values collapse
    to (0, 0) and are recorded as warnings.
    """

    well_id: str
    interval: float
    band_count: int
    start: int
    slots: list[Optional[tuple[int, float]]]
    warnings: list[tuple[int, str]] = field(default_factory=list)


def _present(series: MeasurementSeries) -> np.ndarray:
    vals = series.values[np.isfinite(series.values)]
    if vals.size == 0:
        raise FeatureError(f"{series.well_id}: all slots missing")
    return vals


def series_average(series: MeasurementSeries) -> float:
    """Arithmetic mean of present values."""
    return float(np.mean(_present(series)))


def series_stddev(series: MeasurementSeries) -> float:
    """Population standard deviation of present values."""
    return float(np.std(_present(series)))


def _consecutive_deltas(series: MeasurementSeries) -> tuple[np.ndarray, np.ndarray]:
    """(months, deltas) for adjacent present pairs; delta = v[t] - v[t-1],
    month = t (the later month of the pair)."""
    v = series.values
    ok = np.isfinite(v[1:]) & np.isfinite(v[:-1])
    deltas = (v[1:] - v[:-1])[ok]
    months = (np.arange(1, v.size) + series.start)[ok]
    return months, deltas


def max_monthly_drop(series: MeasurementSeries) -> tuple[float, Optional[int]]:
    """Largest month-over-month loss and the month it landed on.

    Only strictly consecutive present pairs count; ties resolve to the
    earliest month. Returns (0, None) when nothing declined.
    """
    months, deltas = _consecutive_deltas(series)
    if deltas.size == 0:
        return 0.0, None
    drops = -deltas
    i = int(np.argmax(drops))  # argmax returns the first (earliest) maximum
    if drops[i] <= 0:
        return 0.0, None
    return float(drops[i]), int(months[i])


def max_monthly_rise(series: MeasurementSeries) -> tuple[float, Optional[int]]:
    """Mirror of max_monthly_drop for month-over-month gains."""
    months, deltas = _consecutive_deltas(series)
    if deltas.size == 0:
        return 0.0, None
    i = int(np.argmax(deltas))
    if deltas[i] <= 0:
        return 0.0, None
    return float(deltas[i]), int(months[i])


def trend_slope(series: MeasurementSeries) -> float:
    """Ordinary least squares slope of value vs month, in feet per year."""
    v = series.values
    mask = np.isfinite(v)
    if int(mask.sum()) < 2:
        raise FeatureError(f"{series.well_id}: trend needs >=2 present months")
    x = (np.arange(v.size) + series.start)[mask].astype(float)
    y = v[mask]
    xc = x - x.mean()
    return float((xc @ (y - y.mean())) / (xc @ xc)) * 12.0


def missing_intervals(series: MeasurementSeries) -> list[tuple[int, int]]:
    """Maximal runs of missing slots as (start month, length in months)."""
    gaps: list[tuple[int, int]] = []
    run_start: Optional[int] = None
    for i, v in enumerate(series.values):
        if math.isnan(v):
            if run_start is None:
                run_start = i
        elif run_start is not None:
            gaps.append((series.start + run_start, i - run_start))
            run_start = None
    if run_start is not None:
        gaps.append((series.start + run_start, len(series) - run_start))
    return gaps


def detect_anomalies(series: MeasurementSeries, z: float = 3.0) -> list[int]:
    """Months whose consecutive-month delta deviates more than z sigma
    from the mean delta. Needs at least 12 deltas; a flat delta
    distribution flags nothing.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    months, deltas = _consecutive_deltas(series)
    if deltas.size < 12:
        return []
    mu = deltas.mean()
    sigma = deltas.std()
    if sigma == 0:
        return []
    flagged = np.abs(deltas - mu) > z * sigma
    return [int(m) for m in months[flagged]]


def feature_vector(series: MeasurementSeries) -> FeatureVector:
    drop, drop_month = max_monthly_drop(series)
    rise, rise_month = max_monthly_rise(series)
    try:
        slope: Optional[float] = trend_slope(series)
    except FeatureError:
        slope = None
    return FeatureVector(
        well_id=series.well_id,
        average=series_average(series),
        std_dev=series_stddev(series),
        max_monthly_drop=drop,
        max_monthly_drop_month=drop_month,
        max_monthly_rise=rise,
        max_monthly_rise_month=rise_month,
        trend_slope=slope,
        missing_count=series.missing_count(),
        anomaly_count=len(detect_anomalies(series)),
    )


def feature_table(store: WellStore) -> dict[str, FeatureVector]:
    """Feature vectors for every well, cached on the store instance."""
    if store._feature_cache is None:
        store._feature_cache = {
            wid: feature_vector(store.series[wid]) for wid in store.well_ids
        }
    return store._feature_cache


def _rank_value(fv: FeatureVector, feature: RankFeature) -> Optional[float]:
    if feature is RankFeature.AVERAGE:
        return fv.average
    if feature is RankFeature.STD_DEV:
        return fv.std_dev
    if feature is RankFeature.MAX_DROP:
        return fv.max_monthly_drop
    if feature is RankFeature.MAX_RISE:
        return fv.max_monthly_rise
    if feature is RankFeature.TREND:
        return fv.trend_slope
    if feature is RankFeature.MISSING:
        return float(fv.missing_count)
    raise ValueError(f"unknown feature {feature!r}")


def rank_wells(store: WellStore, feature: RankFeature, order: str = "desc",
               k: int = 20) -> list[tuple[str, float]]:
    """Top-k wells by one feature; ties break by well id ascending.

    Wells whose feature is undefined (e.g. trend on a single point) are
    excluded. Returns at most min(k, eligible wells) entries.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    order = order.lower()
    if order not in ("asc", "desc"):
        raise ValueError(f"order must be asc or desc, got {order!r}")
    table = feature_table(store)
    eligible = [
        (wid, val) for wid in store.well_ids
        if (val := _rank_value(table[wid], feature)) is not None
    ]
    eligible.sort(key=lambda t: ((t[1], t[0]) if order == "asc"
                                 else (-t[1], t[0])))
    return eligible[:k]


def mean_series(store: WellStore, well_ids, label: str) -> MeasurementSeries:
    """Per-month mean over the given wells' present values.

    A month is missing only when no member has a value; span is the union
    of member spans.
    """
    ids = list(well_ids)
    if not ids:
        raise FeatureError(f"{label}: no member wells")
    start = min(store.series[w].start for w in ids)
    end = max(store.series[w].end for w in ids)
    n = end - start + 1
    total = np.zeros(n)
    count = np.zeros(n)
    for w in sorted(ids):  # canonical order keeps the sum deterministic
        s = store.series[w]
        off = s.start - start
        mask = np.isfinite(s.values)
        total[off:off + len(s)][mask] += s.values[mask]
        count[off:off + len(s)][mask] += 1
    vals = np.where(count > 0, total / np.maximum(count, 1), np.nan)
    return MeasurementSeries(label, start, vals)


def county_average_series(store: WellStore, county: str) -> MeasurementSeries:
    """Mean series over all wells in a county."""
    ids = store.county_wells(county)
    if not ids:
        raise NotFoundError(f"unknown county {county!r}")
    return mean_series(store, ids, county)


def classify_delta(delta: float, epsilon: float = COMPARISON_EPSILON) -> BandClass:
    if delta > epsilon:
        return BandClass.ABOVE
    if delta < -epsilon:
        return BandClass.BELOW
    return BandClass.EQUAL


def comparison_series(store: WellStore, well_id: str,
                      reference: MeasurementSeries,
                      reference_label: str) -> ComparisonSeries:
    """Align a well against a reference series and classify each month.

    Entries exist only where both sides are present; elsewhere the slot
    is None.
    """
    if well_id not in store:
        raise NotFoundError(f"unknown well {well_id!r}")
    s = store.series[well_id]
    start = max(s.start, reference.start)
    end = min(s.end, reference.end)
    entries: list[Optional[ComparisonEntry]] = []
    for m in range(start, end + 1):
        wv = s.value_at(m)
        rv = reference.value_at(m)
        if wv is None or rv is None:
            entries.append(None)
            continue
        delta = wv - rv
        entries.append(ComparisonEntry(wv, rv, delta, classify_delta(delta)))
    return ComparisonSeries(well_id, reference_label, start, entries)


def county_comparison(store: WellStore, well_id: str) -> ComparisonSeries:
    """Compare a well against its own county's average (well included)."""
    if well_id not in store:
        raise NotFoundError(f"unknown well {well_id!r}")
    county = store.records[well_id].county
    ref = county_average_series(store, county)
    return comparison_series(store, well_id, ref, county)


def horizon_transform(series: MeasurementSeries, interval: float,
                      band_count: int) -> HorizonBandSeries:
    """Split a series into uniform bands of the given interval.

    band_index = floor(v / interval) clamped to the top band; residual is
    whatever remains above the band floor, so
    band_index * interval + residual reconstructs v exactly for unclamped
    values. Negative values map to (0, 0) with a warning.
    """
    if interval <= 0:
        raise ValueError("interval must be positive")
    if band_count < 1:
        raise ValueError("band_count must be >= 1")
    slots: list[Optional[tuple[int, float]]] = []
    warnings: list[tuple[int, str]] = []
    for i, v in enumerate(series.values):
        if math.isnan(v):
            slots.append(None)
            continue
        month = series.start + i
        if v < 0:
            warnings.append((month, f"negative value {v} shown as empty"))
            slots.append((0, 0.0))
            continue
        band = min(int(v // interval), band_count - 1)
        slots.append((band, float(v - band * interval)))
    return HorizonBandSeries(series.well_id, float(interval), int(band_count),
                             series.start, slots, warnings)


FEATURE_CSV_HEADER = [
    "well_id", "average", "std_dev", "max_monthly_drop",
    "max_monthly_drop_month", "max_monthly_rise", "trend_slope",
    "missing_count", "anomaly_count",
]


def feature_table_csv(store: WellStore) -> str:
    """Feature table as CSV text, months as YYYY-MM, sorted by well id."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(FEATURE_CSV_HEADER)
    table = feature_table(store)
    for wid in store.well_ids:
        fv = table[wid]
        w.writerow([
            fv.well_id,
            repr(fv.average),
            repr(fv.std_dev),
            repr(fv.max_monthly_drop),
            format_month(fv.max_monthly_drop_month)
            if fv.max_monthly_drop_month is not None else "",
            repr(fv.max_monthly_rise),
            repr(fv.trend_slope) if fv.trend_slope is not None else "",
            fv.missing_count,
            fv.anomaly_count,
        ])
    return out.getvalue()
