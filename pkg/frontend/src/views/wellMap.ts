// Slippy-tile map with well markers and a hover popup fed entirely by
// the well-detail endpoint. Panning and zooming are internal view state:
// they never touch the shared selection.

import type { SelectionState } from "../state.js";
import type { WellDetail, WellIndexEntry } from "../types.js";
import { clear, el } from "./util.js";

const WIDTH = 460;
const HEIGHT = 300;
const TILE = 256;

function lonToWorldX(lon: number, zoom: number): number {
  return ((lon + 180) / 360) * TILE * 2 ** zoom;
}

function latToWorldY(lat: number, zoom: number): number {
  const rad = (lat * Math.PI) / 180;
  const merc = Math.log(Math.tan(Math.PI / 4 + rad / 2));
  return ((1 - merc / Math.PI) / 2) * TILE * 2 ** zoom;
}

export class WellMapView {
  private centerLat = 34.5;
  private centerLon = -101.7;
  private zoom = 8;
  private haveCenter = false;

  constructor(
    private root: HTMLElement,
    private tileUrlTemplate: string,
    private detailLoader: (id: string) => Promise<WellDetail>,
    private colorOf: (wellId: string) => string,
  ) {}

  render(state: SelectionState, wells: WellIndexEntry[]): void {
    clear(this.root);
    this.root.appendChild(el("h2", "panel-title", "Well map"));
    if (wells.length === 0) {
      this.root.appendChild(el("p", "empty-state", "No wells to show."));
      return;
    }
    const shown = state.selectedWells.length
      ? wells.filter((w) => state.selectedWells.includes(w.well_id))
      : wells;
    if (!this.haveCenter && shown.length) {
      this.centerLat = shown.reduce((s, w) => s + w.lat, 0) / shown.length;
      this.centerLon = shown.reduce((s, w) => s + w.lon, 0) / shown.length;
      this.haveCenter = true;
    }

    const viewport = el("div", "map-viewport");
    viewport.style.width = `${WIDTH}px`;
    viewport.style.height = `${HEIGHT}px`;

    const cx = lonToWorldX(this.centerLon, this.zoom);
    const cy = latToWorldY(this.centerLat, this.zoom);
    const originX = cx - WIDTH / 2;
    const originY = cy - HEIGHT / 2;

    const t0x = Math.floor(originX / TILE);
    const t0y = Math.floor(originY / TILE);
    for (let ty = t0y; ty * TILE < originY + HEIGHT; ty++) {
      for (let tx = t0x; tx * TILE < originX + WIDTH; tx++) {
        const img = el("img", "map-tile") as HTMLImageElement;
        img.src = this.tileUrlTemplate
          .replace("{z}", String(this.zoom))
          .replace("{x}", String(tx))
          .replace("{y}", String(ty));
        img.style.left = `${tx * TILE - originX}px`;
        img.style.top = `${ty * TILE - originY}px`;
        viewport.appendChild(img);
      }
    }

    const popup = el("div", "map-popup");
    popup.style.display = "none";
    const selected = new Set(state.selectedWells);
    for (const well of wells) {
      const px = lonToWorldX(well.lon, this.zoom) - originX;
      const py = latToWorldY(well.lat, this.zoom) - originY;
      if (px < -10 || px > WIDTH + 10 || py < -10 || py > HEIGHT + 10) {
        continue;
      }
      const marker = el("div", "map-marker");
      marker.dataset.wellId = well.well_id;
      marker.style.left = `${px}px`;
      marker.style.top = `${py}px`;
      marker.style.background = selected.has(well.well_id)
        ? this.colorOf(well.well_id) : "#000";
      marker.style.opacity = selected.has(well.well_id) ? "1" : "0.4";
      marker.addEventListener("mouseenter", () => {
        void this.showPopup(popup, well.well_id, px, py);
      });
      marker.addEventListener("mouseleave", () => {
        popup.style.display = "none";
      });
      viewport.appendChild(marker);
    }
    viewport.appendChild(popup);
    this.root.appendChild(viewport);
    this.root.appendChild(this.controls(state, wells));
  }

  private async showPopup(popup: HTMLElement, wellId: string,
                          px: number, py: number): Promise<void> {
    const detail = await this.detailLoader(wellId);
    clear(popup);
    popup.appendChild(el("strong", "", detail.record.well_id));
    const lines = [
      `${detail.record.lat}, ${detail.record.lon}`,
      `${detail.record.county} county`,
      `avg thickness ${detail.features.average} ft`,
      `trend ${detail.features.trend_slope ?? "n/a"} ft/yr`,
    ];
    for (const text of lines) popup.appendChild(el("div", "popup-line", text));
    popup.style.left = `${px + 8}px`;
    popup.style.top = `${py + 8}px`;
    popup.style.display = "block";
  }

  private controls(state: SelectionState,
                   wells: WellIndexEntry[]): HTMLElement {
    const bar = el("div", "map-controls");
    const moves: [string, number, number, number][] = [
      ["north", 0.2, 0, 0], ["south", -0.2, 0, 0],
      ["west", 0, -0.25, 0], ["east", 0, 0.25, 0],
      ["in", 0, 0, 1], ["out", 0, 0, -1],
    ];
    for (const [label, dlat, dlon, dz] of moves) {
      const btn = el("button", "map-btn", label) as HTMLButtonElement;
      btn.addEventListener("click", () => {
        this.centerLat += dlat;
        this.centerLon += dlon;
        this.zoom = Math.max(3, Math.min(15, this.zoom + dz));
        this.haveCenter = true;
        this.render(state, wells);  // selection untouched by design
      });
      bar.appendChild(btn);
    }
    return bar;
  }
}
