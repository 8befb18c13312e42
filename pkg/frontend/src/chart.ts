import { Op, PALETTE, Scene } from "./draw";
import { extent, linearScale, Scale, ticks } from "./scale";

export interface PanelSpec {
  x: number;
  y: number;
  width: number;
  height: number;
  xDomain: [number, number];
  yDomain: [number, number];
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** Flip the y axis so the domain grows downward (trajectory time axes). */
  yDown?: boolean;
}

/** One plot area with scales, axes, and series helpers appending to a scene. */
export class Panel {
  readonly sx: Scale;
  readonly sy: Scale;

  constructor(private scene: Scene, private spec: PanelSpec) {
    this.sx = linearScale(spec.xDomain, [spec.x, spec.x + spec.width]);
    this.sy = spec.yDown
      ? linearScale(spec.yDomain, [spec.y, spec.y + spec.height])
      : linearScale(spec.yDomain, [spec.y + spec.height, spec.y]);
  }

  axes(): this {
    const { x, y, width, height, title, xLabel, yLabel } = this.spec;
    const ops = this.scene.ops;
    ops.push({
      kind: "line",
      points: [
        [x, y],
        [x, y + height],
        [x + width, y + height],
        [x + width, y],
        [x, y],
      ],
      stroke: "#444444",
      width: 1,
    });
    for (const t of ticks(this.spec.xDomain)) {
      const px = this.sx(t);
      ops.push({
        kind: "line",
        points: [
          [px, y + height],
          [px, y + height + 4],
        ],
        stroke: "#444444",
        width: 1,
      });
      ops.push({
        kind: "text",
        x: px,
        y: y + height + 15,
        text: fmtTick(t),
        size: 10,
        fill: "#333333",
        anchor: "middle",
      });
    }
    for (const t of ticks(this.spec.yDomain, 5)) {
      const py = this.sy(t);
      ops.push({
        kind: "line",
        points: [
          [x - 4, py],
          [x, py],
        ],
        stroke: "#444444",
        width: 1,
      });
      ops.push({
        kind: "text",
        x: x - 6,
        y: py + 3,
        text: fmtTick(t),
        size: 10,
        fill: "#333333",
        anchor: "end",
      });
    }
    if (title) {
      ops.push({
        kind: "text",
        x: x + width / 2,
        y: y - 6,
        text: title,
        size: 12,
        fill: "#111111",
        anchor: "middle",
      });
    }
    if (xLabel) {
      ops.push({
        kind: "text",
        x: x + width / 2,
        y: y + height + 30,
        text: xLabel,
        size: 11,
        fill: "#111111",
        anchor: "middle",
      });
    }
    if (yLabel) {
      ops.push({
        kind: "text",
        x: x - 2,
        y: y - 8,
        text: yLabel,
        size: 11,
        fill: "#111111",
        anchor: "end",
      });
    }
    return this;
  }

  /** Polyline, broken where consecutive x jump by more than `breakAt`. */
  line(
    xs: number[],
    ys: number[],
    stroke = PALETTE[0],
    width = 1.2,
    dash?: number[],
    breakAt = Infinity,
  ): this {
    let seg: [number, number][] = [];
    const flush = () => {
      if (seg.length > 1) {
        this.scene.ops.push({ kind: "line", points: seg, stroke, width, dash });
      }
      seg = [];
    };
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(ys[i])) {
        flush();
        continue;
      }
      if (seg.length > 0 && Math.abs(xs[i] - xs[i - 1]) > breakAt) flush();
      seg.push([this.sx(xs[i]), this.sy(ys[i])]);
    }
    flush();
    return this;
  }

  dots(xs: number[], ys: number[], fill = PALETTE[0], r = 2): this {
    for (let i = 0; i < xs.length; i++) {
      this.scene.ops.push({
        kind: "circle",
        x: this.sx(xs[i]),
        y: this.sy(ys[i]),
        r,
        fill,
      });
    }
    return this;
  }

  /** Vertical bars from the x axis, for histogram-style panels. */
  bars(xs: number[], ys: number[], fill = PALETTE[0], barWidth = 2): this {
    const y0 = this.sy(Math.max(0, this.spec.yDomain[0]));
    for (let i = 0; i < xs.length; i++) {
      const px = this.sx(xs[i]);
      const py = this.sy(ys[i]);
      this.scene.ops.push({
        kind: "rect",
        x: px - barWidth / 2,
        y: Math.min(py, y0),
        w: barWidth,
        h: Math.abs(y0 - py),
        fill,
      });
    }
    return this;
  }

  squares(xs: number[], ys: number[], fill = "#111111", size = 5): this {
    for (let i = 0; i < xs.length; i++) {
      this.scene.ops.push({
        kind: "rect",
        x: this.sx(xs[i]) - size / 2,
        y: this.sy(ys[i]) - size / 2,
        w: size,
        h: size,
        fill,
      });
    }
    return this;
  }

  cell(x0: number, x1: number, y0: number, y1: number, fill: string): this {
    const px0 = this.sx(x0);
    const px1 = this.sx(x1);
    const py0 = this.sy(y0);
    const py1 = this.sy(y1);
    this.scene.ops.push({
      kind: "rect",
      x: Math.min(px0, px1),
      y: Math.min(py0, py1),
      w: Math.abs(px1 - px0),
      h: Math.abs(py1 - py0),
      fill,
    });
    return this;
  }

  legend(entries: [string, string][]): this {
    const { x, y } = this.spec;
    entries.forEach(([label, color], i) => {
      const ly = y + 12 + i * 14;
      this.scene.ops.push({
        kind: "line",
        points: [
          [x + 6, ly],
          [x + 26, ly],
        ],
        stroke: color,
        width: 2,
      });
      this.scene.ops.push({
        kind: "text",
        x: x + 30,
        y: ly + 3,
        text: label,
        size: 10,
        fill: "#111111",
        anchor: "start",
      });
    });
    return this;
  }
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const av = Math.abs(v);
  if (av >= 1e4 || av < 1e-3) return v.toExponential(0);
  return String(Number(v.toPrecision(4)));
}

export function newScene(width: number, height: number): Scene {
  return { width, height, background: "white", ops: [] as Op[] };
}

export { extent, ticks };
