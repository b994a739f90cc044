// Single source of truth for the linked views. Panels never mutate state
// directly; they raise intents and the app commits them here. Every
// commit bumps the version, which async loaders use to discard stale
// responses (last write wins).

import type { RankFeatureName } from "./types.js";

export type ChartMode = "LINE" | "HORIZON";
export type ReferenceKind = "COUNTY" | "NEIGHBORS";

export interface SelectionState {
  selectedWells: string[];
  focusWell: string | null;
  month: string;
  feature: RankFeatureName;
  chartMode: ChartMode;
  reference: ReferenceKind;
}

const PALETTE = [
  "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
  "#e6ab02", "#a6761d", "#386cb0", "#f0027f", "#bf5b17",
  "#6a3d9a", "#b15928", "#177e89", "#db3a34", "#ffc857",
  "#2a9d8f", "#e76f51", "#264653", "#8ab17d", "#c44536",
];

export class StateStore {
  private state: SelectionState;
  private listeners: ((s: SelectionState) => void)[] = [];
  private colors = new Map<string, string>();
  version = 0;

  constructor(initial: Partial<SelectionState> = {}) {
    this.state = {
      selectedWells: [],
      focusWell: null,
      month: "2013-06",
      feature: "max_drop",
      chartMode: "LINE",
      reference: "COUNTY",
      ...initial,
    };
    this.normalize();
  }

  get(): SelectionState {
    return { ...this.state, selectedWells: [...this.state.selectedWells] };
  }

  update(patch: Partial<SelectionState>): void {
    this.state = { ...this.state, ...patch };
    if (patch.selectedWells) {
      this.state.selectedWells = [...patch.selectedWells];
    }
    this.normalize();
    this.version += 1;
    const snapshot = this.get();
    for (const fn of this.listeners) fn(snapshot);
  }

  subscribe(fn: (s: SelectionState) => void): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((f) => f !== fn);
    };
  }

  // Stable distinct color per well for the whole session, assigned on
  // first selection and never recycled while the page lives.
  colorOf(wellId: string): string {
    let c = this.colors.get(wellId);
    if (!c) {
      c = PALETTE[this.colors.size % PALETTE.length];
      this.colors.set(wellId, c);
    }
    return c;
  }

  private normalize(): void {
    const seen = new Set<string>();
    this.state.selectedWells = this.state.selectedWells.filter((w) => {
      if (seen.has(w)) return false;
      seen.add(w);
      return true;
    });
    const focus = this.state.focusWell;
    if (focus && !seen.has(focus)) {
      this.state.selectedWells.unshift(focus);
    }
    for (const w of this.state.selectedWells) this.colorOf(w);
  }
}
