#!/usr/bin/env node
/** Render one figure from a recipe file or from per-figure flags.
 *
 *   node dist/cli.js --recipe fig2.json
 *   node dist/cli.js --figure 5 --input bt=out/bt.csv --input bomega=out/bomega.csv \
 *       --output fig5.svg
 *
 * Repeated --input key=path flags accumulate into lists.
 */

import { SchemaError } from "./csv";
import { ResolvedInputs } from "./figures";
import { loadRecipe, validateRecipe } from "./recipe";
import { render } from "./render";

function parseArgs(argv: string[]) {
  const flags: Record<string, string[]> = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new SchemaError(`unexpected argument '${arg}'`);
    }
    const key = arg.slice(2);
    const val = argv[++i];
    if (val === undefined) {
      throw new SchemaError(`flag --${key} needs a value`);
    }
    (flags[key] ??= []).push(val);
  }
  return flags;
}

export function main(argv: string[]): number {
  let flags: Record<string, string[]>;
  try {
    flags = parseArgs(argv);
    if (flags.recipe) {
      const out = render(loadRecipe(flags.recipe[0]));
      console.log(out);
      return 0;
    }
    if (!flags.figure || !flags.output) {
      throw new SchemaError("need --recipe FILE or --figure N ... --output FILE");
    }
    const inputs: ResolvedInputs = {};
    for (const spec of flags.input ?? []) {
      const eq = spec.indexOf("=");
      if (eq < 1) throw new SchemaError(`--input expects key=path, got '${spec}'`);
      const key = spec.slice(0, eq);
      const path = spec.slice(eq + 1);
      const existing = inputs[key];
      if (existing === undefined) inputs[key] = path;
      else if (typeof existing === "string") inputs[key] = [existing, path];
      else existing.push(path);
    }
    const recipe = validateRecipe({
      figure: Number(flags.figure[0]),
      inputs,
      output: flags.output[0],
      style: flags.format ? { format: flags.format[0] } : {},
    });
    console.log(render(recipe));
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
