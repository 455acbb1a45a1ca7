export { parseCsv, commentValue, CsvError } from "./csv.js";
export type { CsvFile } from "./csv.js";
export { SCHEMAS, KINDS, headerDiff } from "./schema.js";
export { linearScale, logScale, formatTick } from "./scale.js";
export { renderFigure, RenderError } from "./figures.js";
export { runCli } from "./cli.js";
