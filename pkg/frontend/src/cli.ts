/**
 * Command line: render --csv <path> --kind <experiment> --out <image>
 *
 * Exit statuses match the harness that produces the CSVs: 0 success,
 * 2 usage error, 3 schema or data mismatch, 4 I/O error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { CsvError, parseCsv } from "./csv.js";
import { RenderError, renderFigure } from "./figures.js";
import { KINDS } from "./schema.js";

const USAGE = `usage: render --csv <path> --kind <experiment> --out <image.svg>
experiments: ${KINDS.join(", ")}`;

export function runCli(argv: string[]): number {
  const args = argv[0] === "render" ? argv.slice(1) : argv;
  let parsed;
  try {
    parsed = parseArgs({
      args,
      options: {
        csv: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
      },
      allowPositionals: false,
    });
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n${USAGE}\n`);
    return 2;
  }
  const { csv, kind, out } = parsed.values;
  if (csv === undefined || kind === undefined || out === undefined) {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }
  if (!KINDS.includes(kind)) {
    process.stderr.write(`error: unknown experiment kind "${kind}"\n${USAGE}\n`);
    return 2;
  }
  let raw: string;
  try {
    raw = readFileSync(csv, "utf8");
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n`);
    return 4;
  }
  let svg: string;
  try {
    svg = renderFigure(kind, parseCsv(raw));
  } catch (error) {
    if (error instanceof RenderError || error instanceof CsvError) {
      process.stderr.write(`error: ${error.message}\n`);
      return 3;
    }
    throw error;
  }
  try {
    writeFileSync(out, svg + "\n");
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n`);
    return 4;
  }
  return 0;
}
