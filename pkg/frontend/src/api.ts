// Thin typed client over the HTTP API. Small per-key caches keep linked
// views snappy; a fixed snapshot means cached bodies never go stale.

import type {
  BandCollection,
  ComparisonPayload,
  HorizonPayload,
  RankEntry,
  RankFeatureName,
  SeriesPayload,
  WellDetail,
  WellIndexEntry,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string,
              message: string) {
    super(message);
  }
}

type FetchLike = (url: string) => Promise<Response>;

export class ApiClient {
  private cache = new Map<string, unknown>();

  constructor(private baseUrl: string,
              private fetchFn: FetchLike = (u) => fetch(u)) {}

  private async getJson<T>(path: string, cacheable = true): Promise<T> {
    if (cacheable && this.cache.has(path)) {
      return this.cache.get(path) as T;
    }
    const resp = await this.fetchFn(this.baseUrl + path);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(body.status ?? resp.status,
                         body.code ?? "INTERNAL",
                         body.message ?? "request failed");
    }
    if (cacheable) this.cache.set(path, body);
    return body as T;
  }

  wells(params: { county?: string; bbox?: string } = {}):
      Promise<WellIndexEntry[]> {
    const q = new URLSearchParams();
    if (params.county) q.set("county", params.county);
    if (params.bbox) q.set("bbox", params.bbox);
    const qs = q.toString();
    return this.getJson(`/api/wells${qs ? "?" + qs : ""}`);
  }

  wellDetail(id: string): Promise<WellDetail> {
    return this.getJson(`/api/wells/${encodeURIComponent(id)}`);
  }

  series(id: string): Promise<SeriesPayload> {
    return this.getJson(
      `/api/wells/${encodeURIComponent(id)}/series?format=values`);
  }

  horizon(id: string, interval: number, bands: number):
      Promise<HorizonPayload> {
    return this.getJson(
      `/api/wells/${encodeURIComponent(id)}/series?format=horizon` +
      `&interval=${interval}&bands=${bands}`);
  }

  comparison(id: string, reference: "county" | "neighbors",
             radius?: number): Promise<ComparisonPayload> {
    let path = `/api/wells/${encodeURIComponent(id)}/comparison` +
               `?reference=${reference}`;
    if (reference === "neighbors" && radius !== undefined) {
      path += `&radius=${radius}`;
    }
    return this.getJson(path);
  }

  rank(feature: RankFeatureName, order: "asc" | "desc" = "desc",
       k = 10000): Promise<RankEntry[]> {
    return this.getJson(`/api/rank?feature=${feature}&order=${order}&k=${k}`);
  }

  contours(month: string): Promise<BandCollection> {
    return this.getJson(`/api/contours?month=${month}`);
  }
}
