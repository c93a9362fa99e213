import { readFileSync } from "fs";

import { SchemaError } from "./schema.js";

export const FIGURE_KINDS = [
  "rate-vs-pu",
  "rate-vs-b",
  "rate-vs-M",
  "rate-vs-K",
  "power-scaling",
  "ee-vs-b",
  "ee-vs-M",
  "tradeoff-ee-rate",
  "tradeoff-power-rate",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export type AxisScale = "linear" | "log";
export type LineStyle = "solid" | "dashed" | "dotted" | "dashdot";

/** Declarative description of one figure; all numbers come from the CSVs. */
export interface FigureSpec {
  /** Input sweep CSV path or paths (multiple files are concatenated). */
  input: string | string[];
  kind: FigureKind;
  /** Output image path; both .svg and .png siblings are written. */
  output: string;
  title?: string;
  x_scale?: AxisScale;
  y_scale?: AxisScale;
  /** Optional case_label -> line style map; unlisted cases cycle defaults. */
  line_styles?: Record<string, LineStyle>;
  width?: number;
  height?: number;
}

const KNOWN_KEYS = new Set([
  "input",
  "kind",
  "output",
  "title",
  "x_scale",
  "y_scale",
  "line_styles",
  "width",
  "height",
]);

export function validateFigureSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new SchemaError("figure spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  for (const key of Object.keys(spec)) {
    if (!KNOWN_KEYS.has(key)) throw new SchemaError(`unknown figure spec key "${key}"`);
  }
  const input = spec.input;
  const inputOk =
    typeof input === "string" ||
    (Array.isArray(input) && input.length > 0 && input.every((p) => typeof p === "string"));
  if (!inputOk) throw new SchemaError('figure spec needs "input": a CSV path or list of paths');
  if (!FIGURE_KINDS.includes(spec.kind as FigureKind)) {
    throw new SchemaError(`figure spec "kind" must be one of ${FIGURE_KINDS.join(", ")}`);
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new SchemaError('figure spec needs a non-empty "output" path');
  }
  for (const axis of ["x_scale", "y_scale"] as const) {
    if (spec[axis] !== undefined && spec[axis] !== "linear" && spec[axis] !== "log") {
      throw new SchemaError(`figure spec "${axis}" must be "linear" or "log"`);
    }
  }
  return spec as unknown as FigureSpec;
}

export function loadFigureSpec(path: string): FigureSpec {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new SchemaError(`cannot read figure spec ${path}: ${(err as Error).message}`);
  }
  return validateFigureSpec(parsed);
}

export function inputPaths(spec: FigureSpec): string[] {
  return typeof spec.input === "string" ? [spec.input] : spec.input;
}
