"""Core domain types: wells, monthly series, the immutable well store.

Months are handled as a single integer index (year * 12 + month - 1) so
that consecutive calendar months differ by exactly 1 and gaps are plain
index arithmetic. Missing slots in a series are stored as NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Optional

import numpy as np

# Default analysis span: January 1995 through December 2016.
DEFAULT_SPAN_START = 1995 * 12 + 0       # 23940
DEFAULT_SPAN_END = 2016 * 12 + 11        # 24203
DEFAULT_SPAN_MONTHS = DEFAULT_SPAN_END - DEFAULT_SPAN_START + 1  # 264

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


class ModelError(ValueError):
    """Raised when a domain type is constructed with invalid data."""


def month_index(year: int, month: int) -> int:
    """Encode a calendar (year, month) as a single integer index."""
    if not 1 <= month <= 12:
        raise ModelError(f"month out of range: {month}")
    return year * 12 + (month - 1)


def parse_month(text: str) -> int:
    """Parse a 'YYYY-MM' string into a month index."""
    m = _MONTH_RE.match(text.strip())
    if not m:
        raise ModelError(f"bad month {text!r}: expected YYYY-MM")
    return month_index(int(m.group(1)), int(m.group(2)))


def format_month(index: int) -> str:
    """Render a month index back to 'YYYY-MM'."""
    year, m = divmod(int(index), 12)
    return f"{year:04d}-{m + 1:02d}"


@dataclass(frozen=True)
class WellRecord:
    """Static identity of one well: location, county, elevation datums.

    lsd and bt are elevations in feet relative to mean sea level; the land
    surface must sit at or above the aquifer bottom.
    """

    well_id: str
    lat: float
    lon: float
    county: str
    lsd: float
    bt: float

    def __post_init__(self) -> None:
        if not self.well_id:
            raise ModelError("well_id must be nonempty")
        if not self.county:
            raise ModelError("county must be nonempty")
        for name in ("lat", "lon", "lsd", "bt"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        if not -90.0 <= self.lat <= 90.0:
            raise ModelError(f"lat out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ModelError(f"lon out of range: {self.lon}")
        if self.lsd < self.bt:
            raise ModelError(f"lsd {self.lsd} below bt {self.bt}")


class MeasurementSeries:
    """Monthly-aligned saturated-thickness values for one well.

    Slot i holds the value for month ``start + i``; NaN marks a missing
    month. At least one slot must be present and present values finite.
    """

    __slots__ = ("well_id", "start", "values")

    def __init__(self, well_id: str, start: int, values) -> None:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ModelError("series needs at least one slot")
        if np.isinf(arr).any():
            raise ModelError("series values must be finite or missing")
        if not np.isfinite(arr).any():
            raise ModelError("series needs at least one present value")
        self.well_id = well_id
        self.start = int(start)
        self.values = arr
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> int:
        """Month index of the last slot (inclusive)."""
        return self.start + self.values.size - 1

    def present_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def present_count(self) -> int:
        return int(np.isfinite(self.values).sum())

    def missing_count(self) -> int:
        return self.values.size - self.present_count()

    def value_at(self, month: int) -> Optional[float]:
        """Value for a month index, or None when missing / out of span."""
        i = month - self.start
        if 0 <= i < self.values.size and math.isfinite(self.values[i]):
            return float(self.values[i])
        return None

    def months(self) -> Iterator[int]:
        return iter(range(self.start, self.start + self.values.size))

    def to_list(self) -> list[Optional[float]]:
        return [float(v) if math.isfinite(v) else None for v in self.values]


@dataclass
class IngestReport:
    """Bookkeeping for one ingest run: counts, rejects, and soft warnings."""

    rows_read: int = 0
    rows_accepted: int = 0
    rows_rejected: int = 0
    rejections: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[tuple[str, int, str]] = field(default_factory=list)

    def reject(self, line_no: int, reason: str) -> None:
        self.rows_rejected += 1
        self.rejections.append((line_no, reason))

    def warn(self, well_id: str, month: int, reason: str) -> None:
        self.warnings.append((well_id, month, reason))

    def check(self) -> None:
        if self.rows_read != self.rows_accepted + self.rows_rejected:
            raise ModelError("ingest report counts do not add up")

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_accepted": self.rows_accepted,
            "rows_rejected": self.rows_rejected,
            "rejections": [
                {"line": n, "reason": r} for n, r in self.rejections
            ],
            "warnings": [
                {"well_id": w, "month": format_month(m), "reason": r}
                for w, m, r in self.warnings
            ],
        }


class WellStore:
    """Immutable, canonically ordered collection of wells and their series.

    Construction sorts wells by id so every downstream computation is
    independent of ingest row order. Safe to share across threads.
    """

    def __init__(self, records: dict[str, WellRecord],
                 series: dict[str, MeasurementSeries]) -> None:
        if set(records) != set(series):
            raise ModelError("records and series must cover the same wells")
        if not records:
            raise ModelError("empty dataset")
        ids = sorted(records)
        self.well_ids: tuple[str, ...] = tuple(ids)
        self.records = MappingProxyType({i: records[i] for i in ids})
        self.series = MappingProxyType({i: series[i] for i in ids})
        counties: dict[str, list[str]] = {}
        for i in ids:
            counties.setdefault(records[i].county.casefold(), []).append(i)
        self._county_index = MappingProxyType(
            {k: tuple(v) for k, v in counties.items()})
        self._feature_cache: dict | None = None

    def __len__(self) -> int:
        return len(self.well_ids)

    def __contains__(self, well_id: str) -> bool:
        return well_id in self.records

    def county_wells(self, county: str) -> tuple[str, ...]:
        """Well ids in a county, matched case-insensitively, sorted by id."""
        return self._county_index.get(county.casefold(), ())

    def county_names(self) -> list[str]:
        """Stored county names (first-seen capitalization), sorted."""
        seen: dict[str, str] = {}
        for rec in self.records.values():
            seen.setdefault(rec.county.casefold(), rec.county)
        return sorted(seen.values())

    def span(self) -> tuple[int, int]:
        """(first, last) month index across all series."""
        start = min(s.start for s in self.series.values())
        end = max(s.end for s in self.series.values())
        return start, end
