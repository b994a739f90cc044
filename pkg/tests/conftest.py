import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))

from stoaviz.ingest import build_well_store, parse_measurements
from stoaviz.model import MeasurementSeries, WellRecord, WellStore

JAN_1995 = 23940


def make_series(values, start=JAN_1995, well_id="W1"):
    """Series from a list where None marks a missing month."""
    arr = np.array([np.nan if v is None else float(v) for v in values])
    return MeasurementSeries(well_id, start, arr)


def make_store(wells):
    """Store from {well_id: (lat, lon, county, values)} dicts."""
    records = {}
    series = {}
    for wid, (lat, lon, county, values) in wells.items():
        records[wid] = WellRecord(well_id=wid, lat=lat, lon=lon,
                                  county=county, lsd=3500.0, bt=3000.0)
        series[wid] = make_series(values, well_id=wid)
    return WellStore(records, series)


def store_from_csv(text):
    import io
    rows, report = parse_measurements(io.StringIO(text))
    return build_well_store(rows, report)


@pytest.fixture
def small_store():
    return make_store({
        "A1": (34.0, -102.0, "Hale", [10, 12, 11, 9, 8]),
        "A2": (34.01, -102.01, "Hale", [20, None, 19, 17, 16]),
        "B1": (35.0, -101.0, "Hartley", [100, 95, 90, 85, 80]),
        "B2": (35.5, -101.5, "Hartley", [50, 50, 50, 50, 50]),
    })
