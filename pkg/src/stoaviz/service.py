"""HTTP JSON/GeoJSON API over an immutable store snapshot.

Every endpoint is a pure read: for a fixed snapshot and query the body is
byte-identical across calls, which makes contour responses cacheable by
their parameter tuple (grid building dominates latency there). Errors
always serialize as ``{"status", "code", "message"}``.
"""

from __future__ import annotations

import hashlib
import json
import threading
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import features as ft
from . import spatial
from .config import Config
from .contours import contour_bands_geojson, extract_contour_bands
from .model import MeasurementSeries, ModelError, WellStore, format_month, parse_month
from .spatial import EmptyGridError

JSON_MEDIA = "application/json"
GEOJSON_MEDIA = "application/geo+json"


class ApiException(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        self.status = status
        self.code = code
        self.message = message


def _bad(message: str) -> ApiException:
    return ApiException(400, "BAD_PARAM", message)


def _not_found(message: str) -> ApiException:
    return ApiException(404, "NOT_FOUND", message)


def _json_response(payload, media_type: str = JSON_MEDIA,
                   status: int = 200) -> Response:
    body = json.dumps(payload, separators=(",", ":"), allow_nan=False)
    return Response(content=body, media_type=media_type, status_code=status)


def _parse_float(raw: str, name: str, positive: bool = False) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise _bad(f"{name} must be a number, got {raw!r}") from None
    if positive and val <= 0:
        raise _bad(f"{name} must be positive, got {val}")
    return val


def _parse_int(raw: str, name: str, minimum: int = 1) -> int:
    try:
        val = int(raw)
    except ValueError:
        raise _bad(f"{name} must be an integer, got {raw!r}") from None
    if val < minimum:
        raise _bad(f"{name} must be >= {minimum}, got {val}")
    return val


def _series_payload(series: MeasurementSeries) -> dict:
    return {
        "well_id": series.well_id,
        "start": format_month(series.start),
        "values": series.to_list(),
    }


def _features_payload(fv: ft.FeatureVector) -> dict:
    return {
        "well_id": fv.well_id,
        "average": fv.average,
        "std_dev": fv.std_dev,
        "max_monthly_drop": fv.max_monthly_drop,
        "max_monthly_drop_month": format_month(fv.max_monthly_drop_month)
        if fv.max_monthly_drop_month is not None else None,
        "max_monthly_rise": fv.max_monthly_rise,
        "max_monthly_rise_month": format_month(fv.max_monthly_rise_month)
        if fv.max_monthly_rise_month is not None else None,
        "trend_slope": fv.trend_slope,
        "missing_count": fv.missing_count,
        "anomaly_count": fv.anomaly_count,
    }


def _comparison_payload(cmp: ft.ComparisonSeries,
                        warning: Optional[str] = None) -> dict:
    payload = {
        "well_id": cmp.well_id,
        "reference_label": cmp.reference_label,
        "start": format_month(cmp.start),
        "entries": [
            None if e is None else {
                "well_value": e.well_value,
                "reference_value": e.reference_value,
                "delta": e.delta,
                "class": e.band.value,
            }
            for e in cmp.entries
        ],
    }
    if warning is not None:
        payload["warning"] = warning
    return payload


def create_app(store: WellStore, config: Config | None = None) -> FastAPI:
    config = config or Config()
    app = FastAPI(title="stoaviz", openapi_url=None)
    app.state.store = store
    app.state.config = config
    contour_cache: dict[tuple, tuple[bytes, str]] = {}
    cache_lock = threading.Lock()

    app.add_middleware(
        CORSMiddleware, allow_origins=config.cors_origins,
        allow_methods=["GET"], allow_headers=["*"])

    @app.exception_handler(ApiException)
    async def api_error(request: Request, exc: ApiException) -> Response:
        return _json_response(
            {"status": exc.status, "code": exc.code, "message": exc.message},
            status=exc.status)

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request,
                         exc: StarletteHTTPException) -> Response:
        status = exc.status_code if exc.status_code in (400, 404) else 500
        code = {400: "BAD_PARAM", 404: "NOT_FOUND"}.get(status, "INTERNAL")
        return _json_response(
            {"status": status, "code": code, "message": str(exc.detail)},
            status=status)

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception) -> Response:
        return _json_response(
            {"status": 500, "code": "INTERNAL", "message": str(exc)},
            status=500)

    def _get_series(well_id: str) -> MeasurementSeries:
        if well_id not in store:
            raise _not_found(f"unknown well {well_id!r}")
        return store.series[well_id]

    @app.get("/api/wells")
    def wells_index(county: str = "", bbox: str = ""):
        ids = store.well_ids
        if county:
            ids = store.county_wells(county)
        if bbox:
            parts = bbox.split(",")
            if len(parts) != 4:
                raise _bad("bbox must be lat_min,lon_min,lat_max,lon_max")
            try:
                lat_min, lon_min, lat_max, lon_max = map(float, parts)
            except ValueError:
                raise _bad(f"bbox has non-numeric part: {bbox!r}") from None
            if lat_min > lat_max or lon_min > lon_max:
                raise _bad("bbox min exceeds max")
            ids = [
                w for w in ids
                if lat_min <= store.records[w].lat <= lat_max
                and lon_min <= store.records[w].lon <= lon_max
            ]
        return _json_response([
            {
                "well_id": w,
                "lat": store.records[w].lat,
                "lon": store.records[w].lon,
                "county": store.records[w].county,
                "months_present": store.series[w].present_count(),
            }
            for w in sorted(ids)
        ])

    @app.get("/api/wells/{well_id}")
    def well_detail(well_id: str):
        series = _get_series(well_id)
        rec = store.records[well_id]
        fv = ft.feature_table(store)[well_id]
        return _json_response({
            "record": {
                "well_id": rec.well_id,
                "lat": rec.lat,
                "lon": rec.lon,
                "county": rec.county,
                "lsd": rec.lsd,
                "bt": rec.bt,
            },
            "features": _features_payload(fv),
            "missing_intervals": [
                {"start": format_month(s), "length": length}
                for s, length in ft.missing_intervals(series)
            ],
        })

    @app.get("/api/wells/{well_id}/series")
    def well_series(well_id: str, format: str = "values",
                    interval: str = "50", bands: str = "12"):
        series = _get_series(well_id)
        if format == "values":
            return _json_response(_series_payload(series))
        if format != "horizon":
            raise _bad(f"format must be values or horizon, got {format!r}")
        iv = _parse_float(interval, "interval", positive=True)
        nb = _parse_int(bands, "bands", minimum=1)
        hz = ft.horizon_transform(series, iv, nb)
        return _json_response({
            "well_id": hz.well_id,
            "interval": hz.interval,
            "band_count": hz.band_count,
            "start": format_month(hz.start),
            "slots": [
                None if s is None else
                {"band_index": s[0], "residual": s[1]}
                for s in hz.slots
            ],
            "warnings": [
                {"month": format_month(m), "reason": r}
                for m, r in hz.warnings
            ],
        })

    @app.get("/api/wells/{well_id}/comparison")
    def well_comparison(well_id: str, reference: str = "county",
                        radius: str = ""):
        series = _get_series(well_id)
        if reference == "county":
            county = store.records[well_id].county
            ref = ft.county_average_series(store, county)
            return _json_response(_comparison_payload(
                ft.comparison_series(store, well_id, ref, county)))
        if reference != "neighbors":
            raise _bad(
                f"reference must be county or neighbors, got {reference!r}")
        r = (_parse_float(radius, "radius", positive=True)
             if radius else app.state.config.neighbor_radius_km)
        ids = spatial.neighbors(store, well_id, radius=r)
        if not ids:
            empty = ft.ComparisonSeries(well_id, "neighbors", series.start, [])
            return _json_response(_comparison_payload(
                empty, warning=f"no neighbors within {r} km"))
        ref = ft.mean_series(store, ids, "neighbors")
        return _json_response(_comparison_payload(
            ft.comparison_series(store, well_id, ref, "neighbors")))

    @app.get("/api/counties/{name}/average")
    def county_average(name: str):
        try:
            series = ft.county_average_series(store, name)
        except ft.NotFoundError:
            raise _not_found(f"unknown county {name!r}") from None
        return _json_response({
            "county": series.well_id,
            "start": format_month(series.start),
            "values": series.to_list(),
        })

    @app.get("/api/rank")
    def rank(feature: str = "", order: str = "desc", k: str = "20"):
        try:
            feat = ft.RankFeature(feature)
        except ValueError:
            valid = ", ".join(f.value for f in ft.RankFeature)
            raise _bad(
                f"unknown feature {feature!r}; expected one of {valid}"
            ) from None
        if order.lower() not in ("asc", "desc"):
            raise _bad(f"order must be asc or desc, got {order!r}")
        kk = _parse_int(k, "k", minimum=1)
        ranked = ft.rank_wells(store, feat, order.lower(), kk)
        return _json_response(
            [{"well_id": w, "value": v} for w, v in ranked])

    @app.get("/api/contours")
    def contour_endpoint(month: str = "", cell: str = "",
                         thresholds: str = ""):
        cfg: Config = app.state.config
        if not month:
            raise _bad("month parameter is required (YYYY-MM)")
        try:
            m = parse_month(month)
        except ModelError as exc:
            raise _bad(str(exc)) from None
        lo, hi = store.span()
        if not lo <= m <= hi:
            raise _bad(
                f"month {month} outside data span "
                f"{format_month(lo)}..{format_month(hi)}")
        cell_size = (_parse_float(cell, "cell", positive=True)
                     if cell else cfg.cell_size_deg)
        if thresholds:
            try:
                ts = [float(t) for t in thresholds.split(",")]
            except ValueError:
                raise _bad(
                    f"thresholds must be comma-separated numbers: "
                    f"{thresholds!r}") from None
        else:
            ts = list(cfg.thresholds)
        if len(ts) < 2 or any(b <= a for a, b in zip(ts, ts[1:])):
            raise _bad("thresholds must be >=2 strictly ascending values")

        key = (m, cell_size, tuple(ts))
        with cache_lock:
            cached = contour_cache.get(key)
        if cached is None:
            try:
                grid = spatial.build_grid(
                    store, m, cell_size=cell_size,
                    power=cfg.idw_power, radius=cfg.idw_radius_km)
                geo = contour_bands_geojson(extract_contour_bands(
                    grid, ts, refine=cfg.contour_refine))
            except EmptyGridError:
                geo = {"type": "FeatureCollection", "features": []}
            body = json.dumps(geo, separators=(",", ":")).encode()
            etag = '"' + hashlib.sha256(body).hexdigest()[:32] + '"'
            cached = (body, etag)
            with cache_lock:
                contour_cache[key] = cached
        body, etag = cached
        return Response(content=body, media_type=GEOJSON_MEDIA,
                        headers={"ETag": etag})

    @app.get("/api/anomalies")
    def anomalies(z: str = "3"):
        zz = _parse_float(z, "z", positive=True)
        out = []
        for wid in store.well_ids:
            months = ft.detect_anomalies(store.series[wid], z=zz)
            if months:
                out.append({
                    "well_id": wid,
                    "months": [format_month(m) for m in months],
                })
        return _json_response(out)

    return app
