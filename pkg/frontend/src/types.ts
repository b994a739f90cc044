// Shapes of the HTTP API payloads this client consumes.

export interface WellIndexEntry {
  well_id: string;
  lat: number;
  lon: number;
  county: string;
  months_present: number;
}

export interface WellFeatures {
  well_id: string;
  average: number;
  std_dev: number;
  max_monthly_drop: number;
  max_monthly_drop_month: string | null;
  max_monthly_rise: number;
  max_monthly_rise_month: string | null;
  trend_slope: number | null;
  missing_count: number;
  anomaly_count: number;
}

export interface WellDetail {
  record: {
    well_id: string;
    lat: number;
    lon: number;
    county: string;
    lsd: number;
    bt: number;
  };
  features: WellFeatures;
  missing_intervals: { start: string; length: number }[];
}

export interface SeriesPayload {
  well_id: string;
  start: string;
  values: (number | null)[];
}

export interface HorizonSlot {
  band_index: number;
  residual: number;
}

export interface HorizonPayload {
  well_id: string;
  interval: number;
  band_count: number;
  start: string;
  slots: (HorizonSlot | null)[];
  warnings: { month: string; reason: string }[];
}

export type ComparisonClass = "ABOVE" | "BELOW" | "EQUAL";

export interface ComparisonEntry {
  well_value: number;
  reference_value: number;
  delta: number;
  class: ComparisonClass;
}

export interface ComparisonPayload {
  well_id: string;
  reference_label: string;
  start: string;
  entries: (ComparisonEntry | null)[];
  warning?: string;
}

export interface RankEntry {
  well_id: string;
  value: number;
}

export interface BandFeature {
  type: "Feature";
  geometry: { type: "MultiPolygon"; coordinates: number[][][][] };
  properties: { lower: number; upper: number; month: string };
}

export interface BandCollection {
  type: "FeatureCollection";
  features: BandFeature[];
}

export type RankFeatureName =
  | "average"
  | "std_dev"
  | "max_drop"
  | "max_rise"
  | "trend"
  | "missing";

export interface AppConfig {
  apiBase: string;
  tileUrlTemplate: string;
  legend: { interval: number; bandCount: number };
  initialMonth?: string;
  neighborRadiusKm?: number;
}
