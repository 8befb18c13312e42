import { numbers, readModel, readTable, requireColumns, SchemaError, strings } from "./csv";
import { diverging, PALETTE, Scene } from "./draw";
import { extent, newScene, Panel } from "./chart";

export interface Style {
  width?: number;
  height?: number;
}

export interface ResolvedInputs {
  [key: string]: string | string[];
}

type Builder = (inputs: ResolvedInputs, style: Style) => Scene;

function one(inputs: ResolvedInputs, key: string, fig: number): string {
  const v = inputs[key];
  if (typeof v !== "string") {
    throw new SchemaError(`figure ${fig}: input '${key}' must be one path`);
  }
  return v;
}

function many(inputs: ResolvedInputs, key: string, fig: number): string[] {
  const v = inputs[key];
  if (typeof v === "string") return [v];
  if (Array.isArray(v) && v.length > 0) return v;
  throw new SchemaError(`figure ${fig}: input '${key}' must list at least one path`);
}

function optionalMany(inputs: ResolvedInputs, key: string): string[] {
  const v = inputs[key];
  if (v === undefined) return [];
  return typeof v === "string" ? [v] : v;
}

// ── trajectories over the scattering grid (figs 1 and 6) ────────────

function trajectoryScene(
  inputs: ResolvedInputs,
  style: Style,
  fig: number,
): Scene {
  const model = readModel(one(inputs, "model", fig));
  const paths = many(inputs, "trajectories", fig);
  const scene = newScene(style.width ?? 560, style.height ?? 420);
  let tMax = 0;
  const trajs = paths.map((p) => {
    const t = readTable(p);
    requireColumns(t, ["step", "x", "alpha"], p);
    const steps = numbers(t, "step", p);
    tMax = Math.max(tMax, steps[steps.length - 1]);
    return { steps, xs: numbers(t, "x", p) };
  });
  const panel = new Panel(scene, {
    x: 60,
    y: 30,
    width: scene.width - 90,
    height: scene.height - 80,
    xDomain: [-0.5, model.n_sites - 0.5],
    yDomain: [-0.5, tMax + 0.5],
    yDown: true,
    xLabel: "x",
    yLabel: "t",
    title: fig === 1 ? "single-particle trajectories" : "orbit trajectories",
  }).axes();
  // scattering points, tiled over the window
  const sx: number[] = [];
  const sy: number[] = [];
  for (let t = 0; t <= tMax; t++) {
    for (const [pt, px] of model.points) {
      if (t % model.m_t === pt) {
        for (let x = px; x < model.n_sites; x += model.m_x) {
          sx.push(x);
          sy.push(t);
        }
      }
    }
  }
  panel.squares(sx, sy, "#111111", 4);
  // break the polyline where the position wraps around the ring
  trajs.forEach((tr, i) => {
    const pieces: { xs: number[]; ts: number[] } = { xs: [], ts: [] };
    for (let j = 0; j < tr.xs.length; j++) {
      if (j > 0 && Math.abs(tr.xs[j] - tr.xs[j - 1]) > model.n_sites / 2) {
        panel.line(pieces.xs, pieces.ts, PALETTE[i % PALETTE.length], 1.4);
        pieces.xs = [];
        pieces.ts = [];
      }
      pieces.xs.push(tr.xs[j]);
      pieces.ts.push(tr.steps[j]);
    }
    panel.line(pieces.xs, pieces.ts, PALETTE[i % PALETTE.length], 1.4);
  });
  return scene;
}

// ── field snapshots with overlays (fig 2) ───────────────────────────

function fieldScene(inputs: ResolvedInputs, style: Style): Scene {
  const rawPaths = many(inputs, "fields", 2);
  const smoothPaths = optionalMany(inputs, "smooth");
  const diracPaths = optionalMany(inputs, "dirac");
  const freePaths = optionalMany(inputs, "free");
  const n = rawPaths.length;
  const scene = newScene(style.width ?? 620, style.height ?? 160 * n + 60);
  const panelH = (scene.height - 60) / n - 30;
  rawPaths.forEach((path, i) => {
    const t = readTable(path);
    requireColumns(t, ["x", "re_R"], path);
    const xs = numbers(t, "x", path);
    const re = numbers(t, "re_R", path);
    const overlays: { ys: number[]; color: string; width: number; dash?: number[] }[] = [];
    const addOverlay = (p: string | undefined, color: string, width: number, dash?: number[]) => {
      if (!p) return;
      const tt = readTable(p);
      requireColumns(tt, ["re_R"], p);
      overlays.push({ ys: numbers(tt, "re_R", p), color, width, dash });
    };
    addOverlay(smoothPaths[i], PALETTE[1], 2);
    addOverlay(diracPaths[i], PALETTE[0], 1.5);
    addOverlay(freePaths[i], "#888888", 1, [3, 3]);
    const all = [re, ...overlays.map((o) => o.ys)].flat();
    const panel = new Panel(scene, {
      x: 60,
      y: 30 + i * (panelH + 30),
      width: scene.width - 90,
      height: panelH,
      xDomain: [0, xs.length - 1],
      yDomain: extent(all),
      title: `t = ${t.meta["time_step"] ?? "?"}`,
      xLabel: i === n - 1 ? "x" : undefined,
      yLabel: i === 0 ? "Re psi_R" : undefined,
    }).axes();
    panel.line(xs, re, "#2ca02c", 0.9);
    overlays.forEach((o) => panel.line(xs, o.ys, o.color, o.width, o.dash));
  });
  return scene;
}

// ── occupation difference panels (fig 3) ────────────────────────────

function occupationScene(inputs: ResolvedInputs, style: Style): Scene {
  const paths = many(inputs, "occupations", 3);
  const n = paths.length;
  const scene = newScene(style.width ?? 620, style.height ?? 130 * n + 60);
  const panelH = (scene.height - 60) / n - 26;
  paths.forEach((path, i) => {
    const t = readTable(path);
    requireColumns(t, ["x", "w1", "w3"], path);
    const xs = numbers(t, "x", path);
    const w1 = numbers(t, "w1", path);
    const w3 = numbers(t, "w3", path);
    const diff = w1.map((v, j) => v - w3[j]);
    const panel = new Panel(scene, {
      x: 60,
      y: 30 + i * (panelH + 26),
      width: scene.width - 90,
      height: panelH,
      xDomain: [0, xs.length - 1],
      yDomain: extent(diff),
      title: `t = ${t.meta["time_step"] ?? "?"}`,
      xLabel: i === n - 1 ? "x" : undefined,
      yLabel: i === 0 ? "w1 - w3" : undefined,
    }).axes();
    panel.line(xs, diff, PALETTE[3], 1.1);
  });
  return scene;
}

// ── momentum histograms (fig 4) ─────────────────────────────────────

function momentumScene(inputs: ResolvedInputs, style: Style): Scene {
  const paths = many(inputs, "momenta", 4);
  const n = paths.length;
  const scene = newScene(style.width ?? 620, style.height ?? 130 * n + 60);
  const panelH = (scene.height - 60) / n - 26;
  paths.forEach((path, i) => {
    const t = readTable(path);
    requireColumns(t, ["k", "w"], path);
    const ks = numbers(t, "k", path);
    const ws = numbers(t, "w", path);
    const panel = new Panel(scene, {
      x: 60,
      y: 30 + i * (panelH + 26),
      width: scene.width - 90,
      height: panelH,
      xDomain: extent(ks, 0.02),
      yDomain: [0, Math.max(...ws) * 1.1 || 1],
      title: `tile ${t.meta["tile"] ?? i}`,
      xLabel: i === n - 1 ? "k (2pi/L)" : undefined,
      yLabel: i === 0 ? "w(q)" : undefined,
    }).axes();
    panel.bars(ks, ws, PALETTE[0], 2);
    // annotate the dominant peaks
    const order = ws
      .map((w, j) => [w, j] as [number, number])
      .sort((a, b) => b[0] - a[0])
      .slice(0, 4)
      .filter(([w]) => w > 0.02);
    for (const [w, j] of order) {
      scene.ops.push({
        kind: "text",
        x: panel.sx(ks[j]),
        y: panel.sy(w) - 4,
        text: String(ks[j]),
        size: 9,
        fill: "#333333",
        anchor: "middle",
      });
    }
  });
  return scene;
}

// ── transition element and its frequency transform (fig 5) ──────────

function spectrumScene(inputs: ResolvedInputs, style: Style): Scene {
  const btPath = one(inputs, "bt", 5);
  const bwPath = one(inputs, "bomega", 5);
  const scene = newScene(style.width ?? 620, style.height ?? 420);
  const bt = readTable(btPath);
  requireColumns(bt, ["t", "value_re"], btPath);
  const ts = numbers(bt, "t", btPath);
  const re = numbers(bt, "value_re", btPath);
  const top = new Panel(scene, {
    x: 60,
    y: 30,
    width: scene.width - 90,
    height: (scene.height - 110) / 2,
    xDomain: extent(ts, 0.01),
    yDomain: extent(re),
    title: "transition element",
    xLabel: "t",
    yLabel: "Re B(t)",
  }).axes();
  top.line(ts, re, PALETTE[0], 1.2);

  const bw = readTable(bwPath);
  requireColumns(bw, ["omega", "value_re"], bwPath);
  const om = numbers(bw, "omega", bwPath);
  const bre = numbers(bw, "value_re", bwPath);
  const hasKernel = bw.columns.includes("kernel_re");
  const kernel = hasKernel ? numbers(bw, "kernel_re", bwPath) : [];
  const bottom = new Panel(scene, {
    x: 60,
    y: scene.height / 2 + 25,
    width: scene.width - 90,
    height: (scene.height - 110) / 2,
    xDomain: extent(om, 0.01),
    yDomain: extent([...bre, ...kernel]),
    title: "frequency spectrum",
    xLabel: "omega",
    yLabel: "Re B(omega)",
  }).axes();
  bottom.line(om, bre, PALETTE[0], 1.2);
  if (hasKernel) {
    bottom.line(om, kernel, PALETTE[1], 1.2, [4, 3]);
    bottom.legend([
      ["spectrum", PALETTE[0]],
      ["single-state kernel", PALETTE[1]],
    ]);
  }
  return scene;
}

// ── sector matrix heatmap (fig 7) ───────────────────────────────────

function blockScene(inputs: ResolvedInputs, style: Style): Scene {
  const path = one(inputs, "block", 7);
  const t = readTable(path);
  requireColumns(t, ["alpha_row", "l_row", "alpha_col", "l_col", "re"], path);
  const ar = strings(t, "alpha_row", path);
  const ac = strings(t, "alpha_col", path);
  const lr = numbers(t, "l_row", path);
  const lc = numbers(t, "l_col", path);
  const re = numbers(t, "re", path);
  const rows: number[] = [];
  const cols: number[] = [];
  const vals: number[] = [];
  for (let i = 0; i < re.length; i++) {
    if (ar[i] === "R" && ac[i] === "R") {
      rows.push(lr[i]);
      cols.push(lc[i]);
      vals.push(re[i]);
    }
  }
  const ls = [...new Set(rows)].sort((a, b) => a - b);
  const index = new Map(ls.map((l, i) => [l, i]));
  const m = ls.length;
  const vmax = Math.max(...vals.map(Math.abs)) || 1;
  const scene = newScene(style.width ?? 480, style.height ?? 470);
  const panel = new Panel(scene, {
    x: 70,
    y: 40,
    width: scene.width - 110,
    height: scene.height - 110,
    xDomain: [-0.5, m - 0.5],
    yDomain: [-0.5, m - 0.5],
    yDown: true,
    title: "Re W_RR(Q, Q')",
    xLabel: "Q' index",
    yLabel: "Q index",
  });
  for (let i = 0; i < vals.length; i++) {
    const r = index.get(rows[i])!;
    const c = index.get(cols[i])!;
    panel.cell(c - 0.5, c + 0.5, r - 0.5, r + 0.5, diverging(vals[i] / vmax));
  }
  panel.axes();
  return scene;
}

// ── dispersion scatter with reference curve (fig 8) ─────────────────

function dispersionScene(inputs: ResolvedInputs, style: Style): Scene {
  const paths = many(inputs, "dispersions", 8);
  const scene = newScene(style.width ?? 560, style.height ?? 400);
  const series: { ks: number[]; es: number[] }[] = [];
  let ref: { ks: number[]; es: number[] } | null = null;
  for (const path of paths) {
    const t = readTable(path);
    requireColumns(t, ["k", "energy", "source"], path);
    const ks = numbers(t, "k", path);
    const es = numbers(t, "energy", path);
    const src = strings(t, "source", path);
    const pts = { ks: [] as number[], es: [] as number[] };
    const rpts = { ks: [] as number[], es: [] as number[] };
    for (let i = 0; i < ks.length; i++) {
      (src[i] === "dirac_reference" ? rpts : pts).ks.push(ks[i]);
      (src[i] === "dirac_reference" ? rpts : pts).es.push(es[i]);
    }
    series.push(pts);
    if (!ref && rpts.ks.length > 0) ref = rpts;
  }
  const allK = series.flatMap((s) => s.ks);
  const allE = series.flatMap((s) => s.es).concat(ref ? ref.es : []);
  const panel = new Panel(scene, {
    x: 60,
    y: 30,
    width: scene.width - 90,
    height: scene.height - 90,
    xDomain: extent(allK, 0.05),
    yDomain: extent(allE, 0.08),
    title: "mean energy vs momentum",
    xLabel: "p (2pi/L)",
    yLabel: "E (2pi/L)",
  }).axes();
  if (ref) {
    const order = ref.ks.map((_, i) => i).sort((a, b) => ref!.ks[a] - ref!.ks[b]);
    panel.line(
      order.map((i) => ref!.ks[i]),
      order.map((i) => ref!.es[i]),
      "#444444",
      1.5,
    );
  }
  series.forEach((s, i) => panel.dots(s.ks, s.es, PALETTE[i % PALETTE.length], 3));
  panel.legend(
    series
      .map((_, i) => [`run ${i + 1}`, PALETTE[i % PALETTE.length]] as [string, string])
      .concat(ref ? [["massive reference", "#444444"]] : []),
  );
  return scene;
}

export const FIGURES: Record<number, { required: string[]; build: Builder }> = {
  1: { required: ["model", "trajectories"], build: (i, s) => trajectoryScene(i, s, 1) },
  2: { required: ["fields"], build: fieldScene },
  3: { required: ["occupations"], build: occupationScene },
  4: { required: ["momenta"], build: momentumScene },
  5: { required: ["bt", "bomega"], build: spectrumScene },
  6: { required: ["model", "trajectories"], build: (i, s) => trajectoryScene(i, s, 6) },
  7: { required: ["block"], build: blockScene },
  8: { required: ["dispersions"], build: dispersionScene },
};
