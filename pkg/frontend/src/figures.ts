/**
 * Turns one experiment CSV into a deterministic SVG figure: mean curves
 * per series, a shaded band of one standard error where the file carries
 * se values, and dashed overlays for bound columns.  All numbers are
 * read from the file; the only arithmetic applied to data is mean +/- se.
 */

import { CsvFile, commentValue } from "./csv.js";
import { headerDiff, SCHEMAS } from "./schema.js";
import { formatTick, linearScale, logScale, Scale } from "./scale.js";
import { bandPath, linePath, tag, text } from "./svg.js";

export class RenderError extends Error {}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 44, right: 178, bottom: 56, left: 64 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

interface Point {
  x: number;
  y: number;
  se: number;
  bound: number | null;
}

interface Series {
  label: string;
  color: string;
  dashed: boolean;
  points: Point[];
}

interface ReferenceLine {
  label: string;
  value: number;
}

interface FigureSpec {
  xLabel: string;
  yLabel: string;
  logX: boolean;
  series: Series[];
  references: ReferenceLine[];
  hasBounds: boolean;
}

function parseNumber(field: string, column: string, row: number): number {
  const value = Number(field);
  if (field.trim() === "" || !Number.isFinite(value)) {
    throw new RenderError(
      `non-numeric value ${JSON.stringify(field)} in column ${column}, data row ${row}`,
    );
  }
  return value;
}

function parseOptional(field: string, column: string, row: number): number | null {
  if (field === "") {
    return null;
  }
  return parseNumber(field, column, row);
}

/** Groups MC sweep rows into one series per distinct rho, file order. */
function sweepSeries(
  csv: CsvFile,
  columns: readonly string[],
  boundColumn: number | null,
): Series[] {
  const byKey = new Map<string, Series>();
  csv.rows.forEach((row, i) => {
    const key = row[1] as string;
    let series = byKey.get(key);
    if (series === undefined) {
      series = {
        label: `rho=${key}`,
        color: PALETTE[byKey.size % PALETTE.length] as string,
        dashed: false,
        points: [],
      };
      byKey.set(key, series);
    }
    const se = parseOptional(row[3] as string, columns[3] as string, i + 1);
    const bound =
      boundColumn === null
        ? null
        : parseOptional(row[boundColumn] as string, columns[boundColumn] as string, i + 1);
    series.points.push({
      x: parseNumber(row[0] as string, columns[0] as string, i + 1),
      y: parseNumber(row[2] as string, columns[2] as string, i + 1),
      se: se ?? 0,
      bound,
    });
  });
  return [...byKey.values()];
}

/** The two-certificate comparison figure: no bands, fixed series. */
function certificateSeries(csv: CsvFile, columns: readonly string[]): Series[] {
  const make = (column: number, dashed: boolean, color: string): Series => ({
    label: columns[column] as string,
    color,
    dashed,
    points: csv.rows.map((row, i) => ({
      x: parseNumber(row[0] as string, columns[0] as string, i + 1),
      y: parseNumber(row[column] as string, columns[column] as string, i + 1),
      se: 0,
      bound: null,
    })),
  });
  return [
    make(2, false, PALETTE[0] as string),
    make(3, true, PALETTE[1] as string),
  ];
}

function buildSpec(kind: string, csv: CsvFile): FigureSpec {
  const columns = SCHEMAS[kind];
  if (columns === undefined) {
    throw new RenderError(`unknown experiment kind: ${kind}`);
  }
  switch (kind) {
    case "line-figure2": {
      const references: ReferenceLine[] = [];
      const base = Number(commentValue(csv.comments, "b"));
      if (Number.isFinite(base) && base > 1) {
        references.push(
          { label: "consistency", value: (base + 1) / (base - 1) },
          {
            label: "robustness",
            value: 1 + (2 * base * base) / (base - 1),
          },
        );
      }
      return {
        xLabel: "y / x",
        yLabel: "expected ratio",
        logX: true,
        series: sweepSeries(csv, columns, 5),
        references,
        hasBounds: true,
      };
    }
    case "onemax-figure3":
      return {
        xLabel: "sigma",
        yLabel: "worst mean payoff fraction",
        logX: false,
        series: sweepSeries(csv, columns, 5),
        references: [],
        hasBounds: true,
      };
    case "ski-figure5":
      return {
        xLabel: "sigma",
        yLabel: "worst mean cost ratio",
        logX: false,
        series: sweepSeries(csv, columns, 5),
        references: [],
        hasBounds: true,
      };
    case "ski-figure6":
      return {
        xLabel: "Q",
        yLabel: "mean cost ratio",
        logX: false,
        series: sweepSeries(csv, columns, null),
        references: [],
        hasBounds: false,
      };
    default:
      return {
        xLabel: "Q",
        yLabel: "competitive ratio bound",
        logX: false,
        series: certificateSeries(csv, columns),
        references: [],
        hasBounds: false,
      };
  }
}

function domains(spec: FigureSpec): { x: [number, number]; y: [number, number] } {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const series of spec.series) {
    for (const point of series.points) {
      xMin = Math.min(xMin, point.x);
      xMax = Math.max(xMax, point.x);
      yMin = Math.min(yMin, point.y - point.se);
      yMax = Math.max(yMax, point.y + point.se);
      if (point.bound !== null) {
        yMin = Math.min(yMin, point.bound);
        yMax = Math.max(yMax, point.bound);
      }
    }
  }
  for (const reference of spec.references) {
    yMin = Math.min(yMin, reference.value);
    yMax = Math.max(yMax, reference.value);
  }
  if (!Number.isFinite(xMin)) {
    return { x: [0, 1], y: [0, 1] };
  }
  if (yMin === yMax) {
    yMin -= 0.5;
    yMax += 0.5;
  }
  const pad = (yMax - yMin) * 0.05;
  return { x: [xMin, xMax], y: [yMin - pad, yMax + pad] };
}

function axes(x: Scale, y: Scale, spec: FigureSpec): string {
  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;
  const parts: string[] = [];
  for (const tick of y.ticks()) {
    const py = y(tick);
    parts.push(
      tag("line", {
        x1: left,
        x2: right,
        y1: py,
        y2: py,
        stroke: "#dddddd",
        "stroke-width": 1,
      }),
      text(formatTick(tick), {
        x: left - 8,
        y: py + 4,
        "text-anchor": "end",
        "font-size": 11,
        fill: "#333333",
      }),
    );
  }
  for (const tick of x.ticks()) {
    const px = x(tick);
    parts.push(
      tag("line", {
        x1: px,
        x2: px,
        y1: bottom,
        y2: bottom + 5,
        stroke: "#333333",
        "stroke-width": 1,
      }),
      text(formatTick(tick), {
        x: px,
        y: bottom + 18,
        "text-anchor": "middle",
        "font-size": 11,
        fill: "#333333",
      }),
    );
  }
  parts.push(
    tag("line", {
      x1: left,
      x2: right,
      y1: bottom,
      y2: bottom,
      stroke: "#333333",
      "stroke-width": 1,
    }),
    tag("line", {
      x1: left,
      x2: left,
      y1: top,
      y2: bottom,
      stroke: "#333333",
      "stroke-width": 1,
    }),
    text(spec.xLabel, {
      x: (left + right) / 2,
      y: HEIGHT - 14,
      "text-anchor": "middle",
      "font-size": 13,
      fill: "#111111",
    }),
    text(spec.yLabel, {
      x: 16,
      y: (top + bottom) / 2,
      "text-anchor": "middle",
      "font-size": 13,
      fill: "#111111",
      transform: `rotate(-90 16 ${(top + bottom) / 2})`,
    }),
  );
  return parts.join("");
}

function legend(spec: FigureSpec): string {
  const x0 = WIDTH - MARGIN.right + 14;
  const entries: Array<{ label: string; color: string; dashed: boolean }> = [];
  for (const series of spec.series) {
    entries.push({ label: series.label, color: series.color, dashed: series.dashed });
  }
  if (spec.hasBounds) {
    entries.push({ label: "bound", color: "#555555", dashed: true });
  }
  for (const reference of spec.references) {
    entries.push({ label: reference.label, color: "#888888", dashed: true });
  }
  return entries
    .map((entry, i) => {
      const py = MARGIN.top + 12 + i * 20;
      const sample = tag("line", {
        x1: x0,
        x2: x0 + 24,
        y1: py,
        y2: py,
        stroke: entry.color,
        "stroke-width": 2,
        ...(entry.dashed ? { "stroke-dasharray": "6 4" } : {}),
      });
      return (
        sample +
        text(entry.label, {
          x: x0 + 30,
          y: py + 4,
          "font-size": 12,
          fill: "#111111",
        })
      );
    })
    .join("");
}

/** Renders a schema-checked CSV; throws RenderError on a mismatch. */
export function renderFigure(kind: string, csv: CsvFile): string {
  const diff = headerDiff(kind, csv.header);
  if (diff !== null) {
    throw new RenderError(diff);
  }
  const spec = buildSpec(kind, csv);
  const { x: xDomain, y: yDomain } = domains(spec);
  const xRange: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
  const yRange: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
  const useLog = spec.logX && spec.series.some((s) => s.points.length > 0);
  const x = useLog ? logScale(xDomain, xRange) : linearScale(xDomain, xRange);
  const y = linearScale(yDomain, yRange);

  const layers: string[] = [];
  for (const series of spec.series) {
    if (series.points.some((p) => p.se > 0)) {
      const top = series.points.map(
        (p): [number, number] => [x(p.x), y(p.y + p.se)],
      );
      const bottom = series.points.map(
        (p): [number, number] => [x(p.x), y(p.y - p.se)],
      );
      layers.push(
        tag("path", {
          d: bandPath(top, bottom),
          fill: series.color,
          "fill-opacity": 0.15,
          stroke: "none",
          class: "se-band",
        }),
      );
    }
  }
  for (const reference of spec.references) {
    layers.push(
      tag("line", {
        x1: MARGIN.left,
        x2: WIDTH - MARGIN.right,
        y1: y(reference.value),
        y2: y(reference.value),
        stroke: "#888888",
        "stroke-width": 1.2,
        "stroke-dasharray": "3 3",
        class: "reference",
      }),
    );
  }
  for (const series of spec.series) {
    const bounded = series.points.filter((p) => p.bound !== null);
    if (bounded.length > 0) {
      layers.push(
        tag("path", {
          d: linePath(bounded.map((p) => [x(p.x), y(p.bound as number)])),
          fill: "none",
          stroke: series.color,
          "stroke-width": 1.2,
          "stroke-dasharray": "6 4",
          class: "bound",
        }),
      );
    }
  }
  for (const series of spec.series) {
    if (series.points.length === 0) {
      continue;
    }
    layers.push(
      tag("path", {
        d: linePath(series.points.map((p) => [x(p.x), y(p.y)])),
        fill: "none",
        stroke: series.color,
        "stroke-width": 2,
        ...(series.dashed ? { "stroke-dasharray": "6 4" } : {}),
        class: "mean",
      }),
    );
  }

  const title = text(kind, {
    x: MARGIN.left,
    y: 24,
    "font-size": 15,
    "font-weight": "bold",
    fill: "#111111",
  });
  const body =
    title + axes(x, y, spec) + layers.join("") + legend(spec);
  return tag(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: WIDTH,
      height: HEIGHT,
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      "font-family": "sans-serif",
    },
    tag("rect", {
      x: 0,
      y: 0,
      width: WIDTH,
      height: HEIGHT,
      fill: "#ffffff",
    }) + body,
  );
}
