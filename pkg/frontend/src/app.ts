// The linking layer: one state store, four panels, one loader per state
// change. Every async load captures the store version at request time and
// is dropped if a newer selection landed meanwhile, so rapid interactions
// settle on the last one.

import { ApiClient } from "./api.js";
import { IntervalLegend } from "./legend.js";
import { StateStore, type SelectionState } from "./state.js";
import type {
  AppConfig,
  ComparisonPayload,
  HorizonPayload,
  SeriesPayload,
  WellDetail,
  WellIndexEntry,
} from "./types.js";
import { ComparisonPanel } from "./views/comparisonPanel.js";
import { ContourView, type ContourData } from "./views/contourView.js";
import { TimeseriesPanel, type TimeseriesData } from "./views/timeseriesPanel.js";
import { clear, el } from "./views/util.js";
import { WellMapView } from "./views/wellMap.js";

export interface PanelRoots {
  toolbar: HTMLElement;
  contour: HTMLElement;
  map: HTMLElement;
  timeseries: HTMLElement;
  comparison: HTMLElement;
}

const MAX_SELECTION = 20;
const FEATURES = ["average", "std_dev", "max_drop", "max_rise", "trend",
                  "missing"] as const;

export class App {
  readonly store: StateStore;
  readonly legend: IntervalLegend;
  readonly contourView: ContourView;
  readonly wellMap: WellMapView;
  readonly timeseries: TimeseriesPanel;
  readonly comparison: ComparisonPanel;
  private detailCache = new Map<string, Promise<WellDetail>>();
  private wellIndex: WellIndexEntry[] = [];

  constructor(private roots: PanelRoots, private api: ApiClient,
              private config: AppConfig) {
    this.store = new StateStore({
      month: config.initialMonth ?? "2013-06",
    });
    this.legend = new IntervalLegend(config.legend.interval,
                                     config.legend.bandCount);
    const colorOf = (id: string) => this.store.colorOf(id);
    this.contourView = new ContourView(
      roots.contour, this.legend,
      (id, county) => void this.pickWell(id, county), colorOf);
    this.wellMap = new WellMapView(
      roots.map, config.tileUrlTemplate,
      (id) => this.loadDetail(id), colorOf);
    this.timeseries = new TimeseriesPanel(
      roots.timeseries, this.legend,
      () => this.toggleMode(), colorOf);
    this.comparison = new ComparisonPanel(
      roots.comparison,
      (ref) => this.store.update({ reference: ref }), colorOf);
  }

  async start(): Promise<void> {
    this.wellIndex = await this.api.wells();
    this.store.subscribe((state) => {
      // a failed load must never take the page down with it
      this.refresh(state).catch((err) => console.error("refresh:", err));
    });
    this.renderToolbar(this.store.get());
    await this.refresh(this.store.get());
  }

  /**

   * Selecting a well on the contour map focuses it and pulls in its
   * county (or bbox-approximated neighbor) set, capped for readability.
   */
  async pickWell(wellId: string, county: string): Promise<void> {
    let group: WellIndexEntry[];
    if (this.store.get().reference === "COUNTY") {
      group = await this.api.wells({ county });
    } else {
      const me = this.wellIndex.find((w) => w.well_id === wellId);
      if (me) {
        const radius = this.config.neighborRadiusKm ?? 10;
        const dLat = radius / 110.574;
        const dLon = radius / (111.320 * Math.cos(
          (me.lat * Math.PI) / 180));
        const bbox = [me.lat - dLat, me.lon - dLon,
                      me.lat + dLat, me.lon + dLon].join(",");
        group = await this.api.wells({ bbox });
      } else {
        group = [];
      }
    }
    const selection = [wellId,
                       ...group.map((w) => w.well_id)
                         .filter((w) => w !== wellId)];
    this.store.update({
      focusWell: wellId,
      selectedWells: selection.slice(0, MAX_SELECTION),
    });
  }

  toggleMode(): void {
    const mode = this.store.get().chartMode === "LINE" ? "HORIZON" : "LINE";
    this.store.update({ chartMode: mode });
  }

  loadDetail(id: string): Promise<WellDetail> {
    let got = this.detailCache.get(id);
    if (!got) {
      got = this.api.wellDetail(id);
      this.detailCache.set(id, got);
    }
    return got;
  }

  private async refresh(state: SelectionState): Promise<void> {
    const version = this.store.version;
    this.renderToolbar(state);

    const [bands, rank] = await Promise.all([
      this.api.contours(state.month),
      this.api.rank(state.feature),
    ]);
    if (version !== this.store.version) return;  // stale: drop silently

    const sizes = new Map(rank.map((r) => [r.well_id, r.value]));
    const contourData: ContourData = {
      bands, wells: this.wellIndex, sizes,
    };
    this.contourView.render(state, contourData);
    this.wellMap.render(state, this.wellIndex);

    const series = new Map<string, SeriesPayload>();
    const horizons = new Map<string, HorizonPayload>();
    if (state.chartMode === "LINE") {
      const payloads = await Promise.all(
        state.selectedWells.map((w) => this.api.series(w)));
      if (version !== this.store.version) return;
      payloads.forEach((p) => series.set(p.well_id, p));
    } else {
      const payloads = await Promise.all(
        state.selectedWells.map((w) => this.api.horizon(
          w, this.legend.interval, this.legend.bandCount)));
      if (version !== this.store.version) return;
      payloads.forEach((p) => horizons.set(p.well_id, p));
    }
    const order = rank.map((r) => r.well_id)
      .filter((w) => state.selectedWells.includes(w));
    const tsData: TimeseriesData = { series, horizons, order };
    this.timeseries.render(state, tsData);

    let cmp: ComparisonPayload | null = null;
    if (state.focusWell) {
      cmp = await this.api.comparison(
        state.focusWell,
        state.reference === "COUNTY" ? "county" : "neighbors",
        state.reference === "NEIGHBORS"
          ? this.config.neighborRadiusKm : undefined);
      if (version !== this.store.version) return;
    }
    this.comparison.render(state, cmp);
  }

  private renderToolbar(state: SelectionState): void {
    const bar = this.roots.toolbar;
    clear(bar);
    bar.appendChild(el("span", "app-title", "Saturated thickness monitor"));

    const month = el("input", "month-input") as HTMLInputElement;
    month.value = state.month;
    month.addEventListener("change", () => {
      if (/^\d{4}-\d{2}$/.test(month.value)) {
        this.store.update({ month: month.value });
      }
    });
    bar.appendChild(month);

    const feature = el("select", "feature-picker") as HTMLSelectElement;
    for (const name of FEATURES) {
      const opt = el("option", "", name) as HTMLOptionElement;
      opt.value = name;
      opt.selected = state.feature === name;
      feature.appendChild(opt);
    }
    feature.addEventListener("change", () => {
      this.store.update({
        feature: feature.value as SelectionState["feature"] });
    });
    bar.appendChild(feature);

    const clearBtn = el("button", "clear-btn", "deselect all");
    clearBtn.addEventListener("click", () => {
      this.store.update({ selectedWells: [], focusWell: null });
    });
    bar.appendChild(clearBtn);
  }
}

export async function boot(root: HTMLElement,
                           configUrl = "./config.json"): Promise<App> {
  const resp = await fetch(configUrl);
  const config = (await resp.json()) as AppConfig;
  clear(root);
  const toolbar = el("div", "toolbar");
  const grid = el("div", "panel-grid");
  const contour = el("div", "panel contour-panel");
  const map = el("div", "panel map-panel");
  const timeseries = el("div", "panel timeseries-panel");
  const comparison = el("div", "panel comparison-panel");
  grid.append(contour, map, timeseries, comparison);
  root.append(toolbar, grid);
  const app = new App(
    { toolbar, contour, map, timeseries, comparison },
    new ApiClient(config.apiBase), config);
  await app.start();
  return app;
}
