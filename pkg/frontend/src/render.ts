import { writeFileSync } from "fs";
import { FIGURES } from "./figures";
import { checkInputsExist, FigureRecipe } from "./recipe";
import { renderPng } from "./raster";
import { renderSvg } from "./svg";

/** Build the scene for a recipe and write the image file it names. */
export function render(recipe: FigureRecipe): string {
  checkInputsExist(recipe);
  const { build } = FIGURES[recipe.figure];
  const scene = build(recipe.inputs, recipe.style ?? {});
  const format =
    recipe.style?.format ?? (recipe.output.endsWith(".png") ? "png" : "svg");
  if (format === "png") {
    writeFileSync(recipe.output, renderPng(scene));
  } else {
    writeFileSync(recipe.output, renderSvg(scene));
  }
  return recipe.output;
}
