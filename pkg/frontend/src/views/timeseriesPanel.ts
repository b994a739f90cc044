// Time-series panel: overlaid line charts, or horizon small multiples
// (one row per well) when the shared legend's banding is preferred.
// Gaps in a series render as blanks in both modes.

import type { IntervalLegend } from "../legend.js";
import type { SelectionState } from "../state.js";
import type { HorizonPayload, SeriesPayload } from "../types.js";
import { addMonths, clear, el, scale, svgEl } from "./util.js";

export interface TimeseriesData {
  /** payloads per selected well, LINE mode */
  series: Map<string, SeriesPayload>;
  /** payloads per selected well, HORIZON mode */
  horizons: Map<string, HorizonPayload>;
  /** well ids in ranking order for the current feature */
  order: string[];
}

const WIDTH = 560;
const LINE_HEIGHT = 260;
const ROW_HEIGHT = 26;

export class TimeseriesPanel {
  constructor(
    private root: HTMLElement,
    readonly legend: IntervalLegend,
    private onToggleMode: () => void,
    private colorOf: (wellId: string) => string,
  ) {}

  render(state: SelectionState, data: TimeseriesData | null): void {
    clear(this.root);
    const head = el("div", "panel-head");
    head.appendChild(el("h2", "panel-title",
                        state.chartMode === "LINE"
                          ? "Time series" : "Horizon graphs"));
    const toggle = el("button", "mode-toggle",
                      state.chartMode === "LINE"
                        ? "switch to horizon" : "switch to line");
    toggle.addEventListener("click", () => this.onToggleMode());
    head.appendChild(toggle);
    this.root.appendChild(head);

    if (!data || state.selectedWells.length === 0) {
      this.root.appendChild(el(
        "p", "empty-state",
        "Select a well on the contour map to plot its series."));
      return;
    }
    if (state.chartMode === "LINE") {
      this.renderLines(state, data);
    } else {
      this.renderHorizons(data);
    }
  }

  private renderLines(state: SelectionState, data: TimeseriesData): void {
    const payloads = [...data.series.values()];
    if (payloads.length === 0) {
      this.root.appendChild(el("p", "empty-state", "Series loading..."));
      return;
    }
    const present: number[] = [];
    let maxLen = 0;
    for (const p of payloads) {
      maxLen = Math.max(maxLen, p.values.length);
      for (const v of p.values) if (v !== null) present.push(v);
    }
    const lo = Math.min(...present);
    const hi = Math.max(...present);
    const x = scale(0, Math.max(1, maxLen - 1), 40, WIDTH - 8);
    const y = scale(lo, hi, LINE_HEIGHT - 18, 10);

    const svg = svgEl("svg", {
      width: WIDTH, height: LINE_HEIGHT, class: "lines-svg",
      viewBox: `0 0 ${WIDTH} ${LINE_HEIGHT}`,
    });
    // axis labels come straight off the payload extremes
    const axisMax = svgEl("text",
                          { x: 4, y: 14, class: "axis-label" });
    axisMax.textContent = String(hi);
    const axisMin = svgEl("text",
                          { x: 4, y: LINE_HEIGHT - 20, class: "axis-label" });
    axisMin.textContent = String(lo);
    svg.appendChild(axisMax);
    svg.appendChild(axisMin);

    for (const payload of payloads) {
      const group = svgEl("g", {
        class: "series-line",
        "data-well-id": payload.well_id,
      });
      let segment: string[] = [];
      const flush = () => {
        if (segment.length > 1) {
          group.appendChild(svgEl("polyline", {
            points: segment.join(" "),
            fill: "none",
            stroke: this.colorOf(payload.well_id),
            "stroke-width": 1.5,
          }));
        }
        segment = [];
      };
      payload.values.forEach((v, i) => {
        if (v === null) {
          flush();  // gap: blank interval, no bridge across missing months
        } else {
          segment.push(`${x(i)},${y(v)}`);
        }
      });
      flush();
      svg.appendChild(group);
    }
    this.root.appendChild(svg);
    this.root.appendChild(this.renderChips(state, payloads, svg));
  }

  private renderChips(state: SelectionState, payloads: SeriesPayload[],
                      svg: SVGElement): HTMLElement {
    const row = el("div", "chip-row");
    for (const payload of payloads) {
      const chip = el("span", "well-chip", payload.well_id);
      chip.dataset.wellId = payload.well_id;
      chip.style.borderColor = this.colorOf(payload.well_id);
      chip.addEventListener("mouseenter", () => {
        for (const g of svg.querySelectorAll(".series-line")) {
          g.classList.toggle(
            "faded",
            g.getAttribute("data-well-id") !== payload.well_id);
        }
      });
      chip.addEventListener("mouseleave", () => {
        for (const g of svg.querySelectorAll(".series-line")) {
          g.classList.remove("faded");
        }
      });
      row.appendChild(chip);
    }
    return row;
  }

  private renderHorizons(data: TimeseriesData): void {
    const ordered = data.order.filter((w) => data.horizons.has(w));
    for (const id of data.horizons.keys()) {
      if (!ordered.includes(id)) ordered.push(id);
    }
    if (ordered.length === 0) {
      this.root.appendChild(el("p", "empty-state", "Horizon loading..."));
      return;
    }
    const list = el("div", "horizon-list");
    for (const wellId of ordered) {
      const payload = data.horizons.get(wellId)!;
      list.appendChild(this.horizonRow(payload));
    }
    this.root.appendChild(list);
  }

  private horizonRow(payload: HorizonPayload): HTMLElement {
    const row = el("div", "horizon-row");
    row.dataset.wellId = payload.well_id;
    row.appendChild(el("span", "horizon-label", payload.well_id));
    const n = payload.slots.length;
    const x = scale(0, Math.max(1, n), 0, WIDTH - 80);
    const svg = svgEl("svg", {
      width: WIDTH - 80, height: ROW_HEIGHT, class: "horizon-svg",
      "data-well-id": payload.well_id,
    });
    const slotWidth = Math.max(0.5, (WIDTH - 80) / Math.max(1, n));
    payload.slots.forEach((slot, i) => {
      if (slot === null) return;  // blank time interval
      const g = svgEl("g", {
        class: "horizon-slot",
        "data-month": addMonths(payload.start, i),
        "data-band": slot.band_index,
        "data-residual": slot.residual,
      });
      g.appendChild(svgEl("rect", {
        x: x(i), y: 0, width: slotWidth, height: ROW_HEIGHT,
        fill: this.legend.colorForBand(slot.band_index),
      }));
      const frac = Math.max(
        0, Math.min(1, slot.residual / payload.interval));
      if (frac > 0 && slot.band_index + 1 < payload.band_count) {
        const h = frac * ROW_HEIGHT;
        g.appendChild(svgEl("rect", {
          x: x(i), y: ROW_HEIGHT - h, width: slotWidth, height: h,
          fill: this.legend.colorForBand(slot.band_index + 1),
          opacity: 0.55,
        }));
      }
      svg.appendChild(g);
    });
    row.appendChild(svg);
    return row;
  }
}
