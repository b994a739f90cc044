// Contour band map: filled isoband polygons under well dots. Clicking a
// dot raises a pick intent; the app turns that into a selection of the
// well plus its county or neighbor set.

import type { IntervalLegend } from "../legend.js";
import type { SelectionState } from "../state.js";
import type { BandCollection, WellIndexEntry } from "../types.js";
import { clear, el, scale, svgEl } from "./util.js";

export interface ContourData {
  bands: BandCollection;
  wells: WellIndexEntry[];
  /** feature value per well driving dot radius (from /api/rank) */
  sizes: Map<string, number>;
}

const WIDTH = 460;
const HEIGHT = 380;

export class ContourView {
  constructor(
    private root: HTMLElement,
    readonly legend: IntervalLegend,
    private onPickWell: (wellId: string, county: string) => void,
    private colorOf: (wellId: string) => string,
  ) {}

  render(state: SelectionState, data: ContourData | null): void {
    clear(this.root);
    this.root.appendChild(el("h2", "panel-title",
                             `Saturated thickness  ${state.month}`));
    if (!data || data.wells.length === 0) {
      this.root.appendChild(
        el("p", "empty-state", "No wells loaded for this month."));
      return;
    }
    const lats = data.wells.map((w) => w.lat);
    const lons = data.wells.map((w) => w.lon);
    for (const f of data.bands.features) {
      for (const poly of f.geometry.coordinates) {
        for (const ring of poly) {
          for (const [lon, lat] of ring) {
            lats.push(lat);
            lons.push(lon);
          }
        }
      }
    }
    const x = scale(Math.min(...lons), Math.max(...lons), 10, WIDTH - 10);
    const y = scale(Math.min(...lats), Math.max(...lats), HEIGHT - 10, 10);

    const svg = svgEl("svg", {
      width: WIDTH, height: HEIGHT, class: "contour-svg",
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    });

    for (const feature of data.bands.features) {
      const { lower } = feature.properties;
      const path: string[] = [];
      for (const poly of feature.geometry.coordinates) {
        for (const ring of poly) {
          ring.forEach(([lon, lat], i) => {
            path.push(`${i === 0 ? "M" : "L"}${x(lon)},${y(lat)}`);
          });
          path.push("Z");
        }
      }
      svg.appendChild(svgEl("path", {
        d: path.join(""),
        fill: this.legend.colorForBand(
          Math.floor(lower / this.legend.interval)),
        "fill-rule": "evenodd",
        stroke: "none",
        opacity: 0.85,
        "data-band-lower": lower,
      }));
    }

    const values = [...data.sizes.values()];
    const vMin = values.length ? Math.min(...values) : 0;
    const vMax = values.length ? Math.max(...values) : 1;
    const r = scale(vMin, vMax, 2.5, 9);
    const selected = new Set(state.selectedWells);
    for (const well of data.wells) {
      const size = data.sizes.get(well.well_id);
      const dot = svgEl("circle", {
        cx: x(well.lon),
        cy: y(well.lat),
        r: size === undefined ? 2.5 : r(size),
        class: "well-dot",
        "data-well-id": well.well_id,
        fill: selected.has(well.well_id)
          ? this.colorOf(well.well_id) : "#000",
        opacity: selected.has(well.well_id) ? 1 : 0.35,
      });
      dot.addEventListener("click", () =>
        this.onPickWell(well.well_id, well.county));
      svg.appendChild(dot);
    }
    this.root.appendChild(svg);
    this.root.appendChild(this.renderLegendStrip());
  }

  private renderLegendStrip(): HTMLElement {
    const strip = el("div", "legend-strip");
    this.legend.colors.forEach((color, i) => {
      const chip = el("span", "legend-chip");
      chip.style.background = color;
      chip.title = `${i * this.legend.interval} - ` +
                   `${(i + 1) * this.legend.interval} ft`;
      strip.appendChild(chip);
    });
    return strip;
  }
}
