import { readFileSync } from "fs";

export interface Table {
  meta: Record<string, unknown>;
  columns: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

/** Parse a scatterwave CSV: one `#` JSON metadata line, a header, then rows. */
export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.length > 0);
  let meta: Record<string, unknown> = {};
  let start = 0;
  if (lines[0]?.startsWith("#")) {
    meta = JSON.parse(lines[0].slice(1).trim());
    start = 1;
  }
  if (start >= lines.length) {
    throw new SchemaError(`${path}: no header row`);
  }
  const columns = lines[start].split(",");
  const rows = lines.slice(start + 1).map((l) => l.split(","));
  return { meta, columns, rows };
}

/** Pull one column as numbers, failing loudly if it is missing. */
export function numbers(table: Table, column: string, path = "table"): number[] {
  const idx = table.columns.indexOf(column);
  if (idx < 0) {
    throw new SchemaError(`${path}: missing column '${column}'`);
  }
  return table.rows.map((r) => Number(r[idx]));
}

export function strings(table: Table, column: string, path = "table"): string[] {
  const idx = table.columns.indexOf(column);
  if (idx < 0) {
    throw new SchemaError(`${path}: missing column '${column}'`);
  }
  return table.rows.map((r) => r[idx]);
}

export function requireColumns(table: Table, cols: string[], path: string): void {
  for (const c of cols) {
    if (!table.columns.includes(c)) {
      throw new SchemaError(`${path}: missing column '${c}'`);
    }
  }
}

export interface ModelFile {
  label: string;
  n_sites: number;
  m_x: number;
  m_t: number;
  eta: string;
  seed: number;
  points: [number, number][];
}

export function readModel(path: string): ModelFile {
  const doc = JSON.parse(readFileSync(path, "utf8"));
  for (const field of ["n_sites", "m_x", "m_t", "points"]) {
    if (!(field in doc)) {
      throw new SchemaError(`${path}: missing field '${field}'`);
    }
  }
  return doc as ModelFile;
}
