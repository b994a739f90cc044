// Bipolar comparison chart: the focus well against its county or
// neighbor average. The signed fill between the two curves is colored
// by the classification the API already computed for each month; the
// client never re-derives it.

import type { SelectionState } from "../state.js";
import type { ComparisonPayload } from "../types.js";
import { addMonths, clear, el, scale, svgEl } from "./util.js";

const WIDTH = 560;
const HEIGHT = 220;

const FILL: Record<string, string> = {
  ABOVE: "#2ca25f",   // green: more water than the reference
  BELOW: "#d95f02",   // orange: less
};

export class ComparisonPanel {
  constructor(
    private root: HTMLElement,
    private onReferenceChange: (ref: "COUNTY" | "NEIGHBORS") => void,
    private colorOf: (wellId: string) => string,
  ) {}

  render(state: SelectionState, payload: ComparisonPayload | null): void {
    clear(this.root);
    const head = el("div", "panel-head");
    head.appendChild(el("h2", "panel-title", "Reference comparison"));
    const picker = el("select", "reference-picker") as HTMLSelectElement;
    for (const kind of ["COUNTY", "NEIGHBORS"] as const) {
      const opt = el("option", "", kind.toLowerCase()) as HTMLOptionElement;
      opt.value = kind;
      opt.selected = state.reference === kind;
      picker.appendChild(opt);
    }
    picker.addEventListener("change", () => {
      this.onReferenceChange(picker.value as "COUNTY" | "NEIGHBORS");
    });
    head.appendChild(picker);
    this.root.appendChild(head);

    if (!state.focusWell || !payload) {
      this.root.appendChild(el(
        "p", "empty-state",
        "Pick a focus well to compare against its county or neighbors."));
      return;
    }
    if (payload.warning) {
      this.root.appendChild(el("p", "panel-warning", payload.warning));
    }
    const entries = payload.entries;
    const present = entries.filter(
      (e): e is NonNullable<typeof e> => e !== null);
    if (present.length === 0) {
      this.root.appendChild(el("p", "empty-state",
                               "No overlapping months to compare."));
      return;
    }
    const values = present.flatMap((e) => [e.well_value, e.reference_value]);
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const x = scale(0, Math.max(1, entries.length - 1), 40, WIDTH - 8);
    const y = scale(lo, hi, HEIGHT - 18, 10);
    const svg = svgEl("svg", {
      width: WIDTH, height: HEIGHT, class: "comparison-svg",
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    });
    const axisMax = svgEl("text", { x: 4, y: 14, class: "axis-label" });
    axisMax.textContent = String(hi);
    const axisMin = svgEl("text",
                          { x: 4, y: HEIGHT - 20, class: "axis-label" });
    axisMin.textContent = String(lo);
    svg.appendChild(axisMax);
    svg.appendChild(axisMin);

    const slotW = (WIDTH - 48) / Math.max(1, entries.length);
    entries.forEach((entry, i) => {
      if (entry === null || entry.class === "EQUAL") return;
      const yw = y(entry.well_value);
      const yr = y(entry.reference_value);
      svg.appendChild(svgEl("rect", {
        x: x(i) - slotW / 2,
        y: Math.min(yw, yr),
        width: slotW,
        height: Math.max(0.5, Math.abs(yw - yr)),
        fill: FILL[entry.class],
        class: "delta-fill",
        "data-month": addMonths(payload.start, i),
        "data-class": entry.class,
      }));
    });

    svg.appendChild(this.polyline(
      entries.map((e) => e && e.reference_value), x, y, "#000", 1.8,
      "reference-line"));
    svg.appendChild(this.polyline(
      entries.map((e) => e && e.well_value), x, y,
      this.colorOf(payload.well_id), 1.8, "well-line"));
    this.root.appendChild(svg);
    this.root.appendChild(el(
      "p", "comparison-caption",
      `${payload.well_id} vs ${payload.reference_label} average ` +
      "(green above, orange below)"));
  }

  private polyline(values: (number | null)[],
                   x: (i: number) => number, y: (v: number) => number,
                   stroke: string, width: number,
                   klass: string): SVGElement {
    const group = svgEl("g", { class: klass });
    let segment: string[] = [];
    const flush = () => {
      if (segment.length > 1) {
        group.appendChild(svgEl("polyline", {
          points: segment.join(" "),
          fill: "none", stroke, "stroke-width": width,
        }));
      }
      segment = [];
    };
    values.forEach((v, i) => {
      if (v === null || v === undefined) flush();
      else segment.push(`${x(i)},${y(v)}`);
    });
    flush();
    return group;
  }
}
