/** Backend-independent display list the figure builders emit. */

export type Op =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | {
      kind: "line";
      points: [number, number][];
      stroke: string;
      width: number;
      dash?: number[];
    }
  | { kind: "circle"; x: number; y: number; r: number; fill: string }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      fill: string;
      anchor: "start" | "middle" | "end";
    };

export interface Scene {
  width: number;
  height: number;
  background: string;
  ops: Op[];
}

export const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
];

/** Map [-1, 1] onto a blue-white-red diverging color. */
export function diverging(v: number): string {
  const t = Math.max(-1, Math.min(1, v));
  const mix = (a: number, b: number, u: number) => Math.round(a + (b - a) * u);
  if (t < 0) {
    const u = 1 + t;
    return `rgb(${mix(33, 255, u)},${mix(102, 255, u)},${mix(172, 255, u)})`;
  }
  const u = 1 - t;
  return `rgb(${mix(178, 255, u)},${mix(24, 255, u)},${mix(43, 255, u)})`;
}
