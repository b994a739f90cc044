import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stoaviz import features as ft
from stoaviz.model import MeasurementSeries

from conftest import JAN_1995, make_series, make_store

# Optional floats with at least one present value, as hypothesis strategy
series_values = st.lists(
    st.one_of(st.none(), st.floats(-500, 1500)), min_size=1, max_size=60,
).filter(lambda vs: any(v is not None for v in vs))


def brute_mean(values):
    vals = [v for v in values if v is not None]
    return sum(vals) / len(vals)


def brute_stddev(values):
    vals = [v for v in values if v is not None]
    mu = sum(vals) / len(vals)
    return math.sqrt(sum((v - mu) ** 2 for v in vals) / len(vals))


def brute_ols_slope(xs, ys):
    n = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)


class TestAverage:
    def test_skips_missing(self):
        assert ft.series_average(make_series([10, None, 20])) == 15

    def test_singleton(self):
        assert ft.series_average(make_series([7])) == 7

    def test_matches_streaming_oracle(self):
        rng = np.random.default_rng(7)
        vals = list(rng.uniform(0, 100, 264))
        got = ft.series_average(make_series(vals))
        assert got == pytest.approx(brute_mean(vals), abs=1e-9)


class TestStddev:
    def test_constant(self):
        assert ft.series_stddev(make_series([5, 5, 5])) == 0

    def test_two_point(self):
        assert ft.series_stddev(make_series([0, 10])) == 5

    def test_matches_two_pass_oracle(self):
        rng = np.random.default_rng(8)
        vals = list(rng.uniform(0, 100, 100))
        got = ft.series_stddev(make_series(vals))
        assert got == pytest.approx(brute_stddev(vals), abs=1e-9)


class TestDropRise:
    def test_largest_decline_and_month(self):
        drop, month = ft.max_monthly_drop(make_series([10, 8, 9, 5]))
        assert drop == 4 and month == JAN_1995 + 3  # month of the 5

    def test_gap_breaks_adjacency(self):
        assert ft.max_monthly_drop(make_series([10, None, 2])) == (0.0, None)

    def test_monotone_increasing(self):
        assert ft.max_monthly_drop(make_series(range(1, 13))) == (0.0, None)

    def test_rise_mirror(self):
        rise, month = ft.max_monthly_rise(make_series([5, 9, 8]))
        assert rise == 4 and month == JAN_1995 + 1  # month of the 9

    def test_flat_no_rise(self):
        assert ft.max_monthly_rise(make_series([5, 5])) == (0.0, None)

    def test_tie_earliest_month(self):
        drop, month = ft.max_monthly_drop(make_series([9, 5, 9, 5]))
        assert drop == 4 and month == JAN_1995 + 1

    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=40))
    @settings(max_examples=80)
    def test_drop_equals_rise_of_reversed(self, vals):
        drop, _ = ft.max_monthly_drop(make_series(vals))
        rise, _ = ft.max_monthly_rise(make_series(vals[::-1]))
        assert drop == rise


class TestTrend:
    def test_exact_linear(self):
        vals = [2 * i for i in range(24)]
        assert ft.trend_slope(make_series(vals)) == pytest.approx(24.0, abs=1e-9)

    def test_constant_zero(self):
        assert ft.trend_slope(make_series([3, 3, 3])) == pytest.approx(0.0)

    def test_matches_normal_equations_oracle(self):
        rng = np.random.default_rng(9)
        vals = [10 + 0.5 * i + rng.normal(0, 2) for i in range(48)]
        vals[5] = vals[17] = None
        s = make_series(vals)
        xs = [JAN_1995 + i for i, v in enumerate(vals) if v is not None]
        ys = [v for v in vals if v is not None]
        expect = brute_ols_slope(xs, ys) * 12
        assert ft.trend_slope(s) == pytest.approx(expect, abs=1e-6)

    def test_undefined_below_two_points(self):
        with pytest.raises(ft.FeatureError):
            ft.trend_slope(make_series([42]))


class TestMissingIntervals:
    def test_interior_run(self):
        s = make_series([1, None, None, 2])
        assert ft.missing_intervals(s) == [(JAN_1995 + 1, 2)]

    def test_fully_present(self):
        assert ft.missing_intervals(make_series([1, 2, 3])) == []

    def test_alternating(self):
        s = make_series([1, None, 2, None, 3, None])
        assert ft.missing_intervals(s) == [
            (JAN_1995 + 1, 1), (JAN_1995 + 3, 1), (JAN_1995 + 5, 1)]

    def test_count_matches_vector(self):
        s = make_series([1, None, None, 4, None, 6])
        gaps = ft.missing_intervals(s)
        assert sum(length for _, length in gaps) == s.missing_count() == 3


class TestAnomalies:
    def test_linear_series_clean(self):
        s = make_series([float(i) for i in range(24)])
        assert ft.detect_anomalies(s) == []

    def test_crash_month_flagged(self):
        # 24 deltas: 23 of +1 and one of -50 landing on month index 12.
        # mean = -27/24 = -1.125, sigma = sqrt(2492.625/24) ~ 10.19;
        # |-50 + 1.125| = 48.875 > 3 sigma = 30.57, all +1 deltas stay inside.
        vals = [100.0 + i for i in range(12)]
        vals += [vals[-1] - 50.0]
        vals += [vals[-1] + i + 1 for i in range(12)]
        assert len(vals) == 25
        s = make_series(vals)
        assert ft.detect_anomalies(s, z=3) == [JAN_1995 + 12]

    def test_below_minimum_delta_count(self):
        rng = np.random.default_rng(3)
        s = make_series(list(rng.uniform(0, 100, 10)))
        assert ft.detect_anomalies(s) == []

    @given(st.integers(-400, 400), st.integers(-40, 40), st.integers(13, 40))
    @settings(max_examples=40)
    def test_affine_series_clean(self, a8, b8, n):
        # dyadic a, b keep every value exactly representable, so the
        # deltas are exactly constant and sigma is exactly zero
        a, b = a8 / 8.0, b8 / 8.0
        s = make_series([a + b * i for i in range(n)])
        assert ft.detect_anomalies(s) == []

    def test_z_must_be_positive(self):
        with pytest.raises(ValueError):
            ft.detect_anomalies(make_series([1, 2]), z=0)


class TestRank:
    def test_tie_broken_by_id(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [10, 6, 10]),  # drop 4
            "B": (34.1, -102.0, "Hale", [20, 11, 11]),  # drop 9
            "C": (34.2, -102.0, "Hale", [9, 5, 5]),     # drop 4
        })
        out = ft.rank_wells(store, ft.RankFeature.MAX_DROP, "desc", 3)
        assert [w for w, _ in out] == ["B", "A", "C"]

    def test_k_larger_than_store(self, small_store):
        out = ft.rank_wells(small_store, ft.RankFeature.AVERAGE, "asc", 99)
        assert len(out) == 4

    def test_matches_full_sort_oracle(self):
        rng = np.random.default_rng(11)
        wells = {
            f"W{i:03d}": (34.0 + i * 1e-3, -102.0, "Hale",
                          list(rng.uniform(0, 300, 24)))
            for i in range(100)
        }
        store = make_store(wells)
        got = ft.rank_wells(store, ft.RankFeature.STD_DEV, "desc", 10)
        table = {w: brute_stddev(vals)
                 for w, (_, _, _, vals) in wells.items()}
        expect = sorted(table.items(), key=lambda t: (-t[1], t[0]))[:10]
        assert [w for w, _ in got] == [w for w, _ in expect]
        for (_, a), (_, b) in zip(got, expect):
            assert a == pytest.approx(b, abs=1e-9)

    def test_undefined_features_excluded(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [10]),          # trend undefined
            "B": (34.1, -102.0, "Hale", [10, 11, 12]),
        })
        out = ft.rank_wells(store, ft.RankFeature.TREND, "desc", 5)
        assert [w for w, _ in out] == ["B"]

    def test_bad_args(self, small_store):
        with pytest.raises(ValueError):
            ft.rank_wells(small_store, ft.RankFeature.AVERAGE, "upward", 3)
        with pytest.raises(ValueError):
            ft.rank_wells(small_store, ft.RankFeature.AVERAGE, "asc", 0)

    def test_deterministic_rerun(self, small_store):
        a = ft.rank_wells(small_store, ft.RankFeature.MAX_DROP, "desc", 4)
        b = ft.rank_wells(small_store, ft.RankFeature.MAX_DROP, "desc", 4)
        assert a == b


class TestCountyAverage:
    def test_single_well_identity(self, small_store):
        one = make_store({"X": (34.0, -102.0, "Lone", [5, 7, None, 9])})
        avg = ft.county_average_series(one, "Lone")
        assert np.array_equal(avg.values, one.series["X"].values,
                              equal_nan=True)

    def test_two_well_mean(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [10, 10]),
            "B": (34.1, -102.0, "Hale", [20, 30]),
        })
        avg = ft.county_average_series(store, "Hale")
        assert list(avg.values) == [15, 20]

    def test_present_only_mean(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [7, 7]),
            "B": (34.1, -102.0, "Hale", [None, 9]),
        })
        avg = ft.county_average_series(store, "Hale")
        assert avg.values[0] == 7 and avg.values[1] == 8

    def test_case_insensitive_and_unknown(self, small_store):
        assert ft.county_average_series(small_store, "HALE") is not None
        with pytest.raises(ft.NotFoundError):
            ft.county_average_series(small_store, "Nowhere")

    def test_union_span(self):
        store = make_store({"A": (34.0, -102.0, "Hale", [1, 2, 3])})
        b = make_series([10, 11], start=JAN_1995 + 4, well_id="B")
        from stoaviz.model import WellRecord, WellStore
        records = dict(store.records)
        series = dict(store.series)
        records["B"] = WellRecord(well_id="B", lat=34.1, lon=-102.0,
                                  county="Hale", lsd=3500.0, bt=3000.0)
        series["B"] = b
        store2 = WellStore(records, series)
        avg = ft.county_average_series(store2, "Hale")
        assert avg.start == JAN_1995 and avg.end == JAN_1995 + 5
        assert math.isnan(avg.values[3])  # no well has month 3

    def test_identical_wells_equal_member(self):
        vals = [31.5, 30.25, None, 28.125]
        store = make_store({
            "A": (34.0, -102.0, "Hale", vals),
            "B": (34.1, -102.0, "Hale", vals),
            "C": (34.2, -102.0, "Hale", vals),
        })
        avg = ft.county_average_series(store, "Hale")
        member = store.series["A"].values
        for got, want in zip(avg.values, member):
            if math.isnan(want):
                assert math.isnan(got)
            else:
                assert got == pytest.approx(want, abs=1e-12)


class TestComparison:
    def test_constant_offset_above(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [20, 25, 30]),
            "B": (34.1, -102.0, "Hale", [10, 15, 20]),
        })
        cmp = ft.county_comparison(store, "A")
        assert all(e.band is ft.BandClass.ABOVE for e in cmp.entries)
        assert all(e.delta == 5 for e in cmp.entries)

    def test_sole_member_equal(self):
        store = make_store({"A": (34.0, -102.0, "Hale", [20, 25, 30])})
        cmp = ft.county_comparison(store, "A")
        assert all(e.band is ft.BandClass.EQUAL and e.delta == 0
                   for e in cmp.entries)

    def test_flip_at_known_month(self):
        # A - B flips sign between index 2 and 3, so classes flip there
        store = make_store({
            "A": (34.0, -102.0, "Hale", [30, 30, 30, 10, 10]),
            "B": (34.1, -102.0, "Hale", [10, 10, 10, 30, 30]),
        })
        cmp = ft.county_comparison(store, "A")
        bands = [e.band for e in cmp.entries]
        assert bands == [ft.BandClass.ABOVE] * 3 + [ft.BandClass.BELOW] * 2

    def test_entries_only_where_both_present(self):
        store = make_store({
            "A": (34.0, -102.0, "Hale", [1, None, 3]),
            "B": (34.1, -102.0, "Hale", [None, 2, 4]),
        })
        cmp = ft.comparison_series(
            store, "A", store.series["B"], "B")
        assert cmp.entries[0] is None and cmp.entries[1] is None
        assert cmp.entries[2].delta == -1

    @given(series_values)
    @settings(max_examples=50)
    def test_classes_partition_entries(self, vals):
        store = make_store({
            "A": (34.0, -102.0, "Hale", vals),
            "B": (34.1, -102.0, "Hale", vals[::-1]),
        })
        cmp = ft.county_comparison(store, "A")
        for e in cmp.entries:
            if e is not None:
                assert e.band in (ft.BandClass.ABOVE, ft.BandClass.BELOW,
                                  ft.BandClass.EQUAL)
                assert e.delta == e.well_value - e.reference_value


class TestHorizon:
    def test_band_and_residual(self):
        h = ft.horizon_transform(make_series([35.0]), 20, 4)
        assert h.slots[0] == (1, 15)

    def test_boundary_goes_up(self):
        h = ft.horizon_transform(make_series([20.0]), 20, 4)
        assert h.slots[0] == (1, 0)

    def test_top_band_clamps(self):
        h = ft.horizon_transform(make_series([500.0]), 50, 4)
        assert h.slots[0] == (3, 350)

    def test_negative_warns(self):
        h = ft.horizon_transform(make_series([-5.0, 10.0]), 10, 4)
        assert h.slots[0] == (0, 0.0)
        assert len(h.warnings) == 1 and h.warnings[0][0] == JAN_1995

    def test_missing_stays_missing(self):
        h = ft.horizon_transform(make_series([10.0, None]), 10, 2)
        assert h.slots[1] is None

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            ft.horizon_transform(make_series([1.0]), 0, 4)

    @given(st.lists(st.floats(0, 1000), min_size=1, max_size=40),
           st.floats(0.5, 100), st.integers(1, 12))
    @settings(max_examples=100)
    def test_reconstruction(self, vals, interval, band_count):
        h = ft.horizon_transform(make_series(vals), interval, band_count)
        for v, slot in zip(vals, h.slots):
            band, residual = slot
            assert band * interval + residual == pytest.approx(v, abs=1e-9)
            assert 0 <= band <= band_count - 1


class TestFeatureVectorAndCsv:
    def test_missing_count_and_bounds(self):
        fv = ft.feature_vector(make_series([10, None, 20, None, 30]))
        assert fv.missing_count == 2
        assert 10 <= fv.average <= 30
        assert fv.std_dev >= 0

    def test_csv_layout(self, small_store):
        text = ft.feature_table_csv(small_store)
        lines = text.strip().split("\n")
        assert lines[0] == ("well_id,average,std_dev,max_monthly_drop,"
                            "max_monthly_drop_month,max_monthly_rise,"
                            "trend_slope,missing_count,anomaly_count")
        assert len(lines) == 5
        assert lines[1].startswith("A1,")

    def test_csv_deterministic(self, small_store):
        assert ft.feature_table_csv(small_store) == ft.feature_table_csv(
            small_store)

    def test_order_invariance(self):
        csv_a = "\n".join([
            "well_id,date,lat,lon,county,lsd,wl,bt",
            "W1,1995-01,34.1,-101.9,Hale,3400,120,3250",
            "W2,1995-02,35.0,-101.0,Hartley,3300,90,3100",
            "W1,1995-02,34.1,-101.9,Hale,3400,100,3250",
        ]) + "\n"
        csv_b = "\n".join([
            "well_id,date,lat,lon,county,lsd,wl,bt",
            "W1,1995-02,34.1,-101.9,Hale,3400,100,3250",
            "W2,1995-02,35.0,-101.0,Hartley,3300,90,3100",
            "W1,1995-01,34.1,-101.9,Hale,3400,120,3250",
        ]) + "\n"
        from conftest import store_from_csv
        sa, _ = store_from_csv(csv_a)
        sb, _ = store_from_csv(csv_b)
        assert ft.feature_table_csv(sa) == ft.feature_table_csv(sb)
