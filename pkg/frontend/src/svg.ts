import { Op, Scene } from "./draw";

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

const num = (v: number) => {
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
};

function opToSvg(op: Op): string {
  switch (op.kind) {
    case "rect":
      return `<rect x="${num(op.x)}" y="${num(op.y)}" width="${num(op.w)}" height="${num(op.h)}" fill="${op.fill}"/>`;
    case "line": {
      const pts = op.points.map(([x, y]) => `${num(x)},${num(y)}`).join(" ");
      const dash = op.dash ? ` stroke-dasharray="${op.dash.join(",")}"` : "";
      return `<polyline points="${pts}" fill="none" stroke="${op.stroke}" stroke-width="${num(op.width)}"${dash}/>`;
    }
    case "circle":
      return `<circle cx="${num(op.x)}" cy="${num(op.y)}" r="${num(op.r)}" fill="${op.fill}"/>`;
    case "text":
      return `<text x="${num(op.x)}" y="${num(op.y)}" font-size="${num(op.size)}" fill="${op.fill}" text-anchor="${op.anchor}" font-family="Helvetica, Arial, sans-serif">${esc(op.text)}</text>`;
  }
}

export function renderSvg(scene: Scene): string {
  const body = scene.ops.map(opToSvg).join("\n  ");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">\n` +
    `  <rect width="${scene.width}" height="${scene.height}" fill="${scene.background}"/>\n` +
    `  ${body}\n</svg>\n`
  );
}
