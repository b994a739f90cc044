// One interval legend is shared by the contour map and the horizon rows,
// so a band means the same thickness range in every panel.

function lerpChannel(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

function lerpColor(a: [number, number, number], b: [number, number, number],
                   t: number): string {
  const rgb = [0, 1, 2].map((i) => lerpChannel(a[i], b[i], t));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

const THIN: [number, number, number] = [166, 97, 26];   // light brown
const THICK: [number, number, number] = [8, 48, 107];   // dark blue

export class IntervalLegend {
  readonly interval: number;
  readonly bandCount: number;
  readonly colors: string[];

  constructor(interval: number, bandCount: number) {
    if (interval <= 0 || bandCount < 1) {
      throw new Error("legend needs positive interval and bands");
    }
    this.interval = interval;
    this.bandCount = bandCount;
    this.colors = [];
    for (let i = 0; i < bandCount; i++) {
      const t = bandCount === 1 ? 1 : i / (bandCount - 1);
      this.colors.push(lerpColor(THIN, THICK, t));
    }
  }

  colorForBand(index: number): string {
    const i = Math.max(0, Math.min(this.bandCount - 1, index));
    return this.colors[i];
  }

  colorForValue(value: number): string {
    return this.colorForBand(Math.floor(value / this.interval));
  }

  thresholds(): number[] {
    const out: number[] = [];
    for (let i = 0; i <= this.bandCount; i++) out.push(i * this.interval);
    return out;
  }
}
