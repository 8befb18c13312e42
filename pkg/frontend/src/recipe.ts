import { existsSync, readFileSync } from "fs";
import { dirname, resolve } from "path";
import { SchemaError } from "./csv";
import { FIGURES, ResolvedInputs, Style } from "./figures";

export interface FigureRecipe {
  figure: number;
  inputs: ResolvedInputs;
  output: string;
  style?: Style & { format?: "svg" | "png" };
}

export function loadRecipe(path: string): FigureRecipe {
  const doc = JSON.parse(readFileSync(path, "utf8"));
  const base = dirname(resolve(path));
  const recipe = validateRecipe(doc);
  // paths inside a recipe file are relative to the file itself
  const rebase = (p: string) => (p.startsWith("/") ? p : resolve(base, p));
  const inputs: ResolvedInputs = {};
  for (const [k, v] of Object.entries(recipe.inputs)) {
    inputs[k] = typeof v === "string" ? rebase(v) : v.map(rebase);
  }
  return { ...recipe, inputs, output: rebase(recipe.output) };
}

export function validateRecipe(doc: unknown): FigureRecipe {
  if (typeof doc !== "object" || doc === null) {
    throw new SchemaError("recipe must be a JSON object");
  }
  const r = doc as Record<string, unknown>;
  const figure = Number(r.figure);
  if (!(figure in FIGURES)) {
    throw new SchemaError(`recipe: unknown figure id '${r.figure}'`);
  }
  if (typeof r.output !== "string") {
    throw new SchemaError("recipe: 'output' must be a path");
  }
  if (typeof r.inputs !== "object" || r.inputs === null) {
    throw new SchemaError("recipe: 'inputs' must be an object");
  }
  const inputs = r.inputs as ResolvedInputs;
  for (const key of FIGURES[figure].required) {
    if (!(key in inputs)) {
      throw new SchemaError(`recipe for figure ${figure}: missing input '${key}'`);
    }
  }
  return {
    figure,
    inputs,
    output: r.output,
    style: (r.style ?? {}) as FigureRecipe["style"],
  };
}

export function checkInputsExist(recipe: FigureRecipe): void {
  for (const v of Object.values(recipe.inputs)) {
    for (const p of typeof v === "string" ? [v] : v) {
      if (!existsSync(p)) {
        throw new SchemaError(`input file not found: ${p}`);
      }
    }
  }
}
