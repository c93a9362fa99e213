import Papa from "papaparse";

/** Exact column order emitted by the sweep engine. */
export const CSV_COLUMNS = [
  "sweep_kind",
  "axis_name",
  "axis_value",
  "case_label",
  "method",
  "M",
  "M0",
  "M1",
  "N",
  "b",
  "K_db",
  "pu_db",
  "tau",
  "kappa",
  "sum_rate_bpshz",
  "per_user_rate_json",
  "stderr_bpshz",
  "p_total_w",
  "ee_bits_per_joule",
  "seed",
  "n_realizations",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export interface SweepRow {
  sweep_kind: string;
  axis_name: string;
  axis_value: number;
  case_label: string;
  method: string;
  M: number;
  M0: number;
  M1: number;
  N: number;
  b: number;
  K_db: number;
  pu_db: number;
  tau: number;
  kappa: number;
  sum_rate_bpshz: number;
  per_user_rate_json: string;
  stderr_bpshz: number | null;
  p_total_w: number;
  ee_bits_per_joule: number;
  seed: number | null;
  n_realizations: number | null;
}

export interface SweepCsv {
  metadata: Record<string, string>;
  rows: SweepRow[];
}

/** Raised when an input file does not match the sweep CSV contract. */
export class SchemaError extends Error {}

const STRING_COLUMNS = new Set<ColumnName>([
  "sweep_kind",
  "axis_name",
  "case_label",
  "method",
  "per_user_rate_json",
]);
const OPTIONAL_COLUMNS = new Set<ColumnName>(["stderr_bpshz", "seed", "n_realizations"]);

function parseNumber(column: string, raw: string): number {
  // the emitter writes python float reprs; dB columns may be +-inf
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`column "${column}" holds non-numeric value ${JSON.stringify(raw)}`);
  }
  return value;
}

export function parseSweepCsv(text: string): SweepCsv {
  const metadata: Record<string, string> = {};
  const dataLines: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq > 0) metadata[body.slice(0, eq).trim()] = body.slice(eq + 1);
    } else if (line.length > 0) {
      dataLines.push(line);
    }
  }
  if (dataLines.length === 0) {
    throw new SchemaError("input contains no CSV header");
  }
  const parsed = Papa.parse<Record<string, string>>(dataLines.join("\n"), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`malformed CSV: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of CSV_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`missing required column "${column}"`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("no data rows after the header");
  }
  const rows = parsed.data.map((record) => {
    const row: Record<string, unknown> = {};
    for (const column of CSV_COLUMNS) {
      const raw = record[column] ?? "";
      if (STRING_COLUMNS.has(column)) {
        row[column] = raw;
      } else if (OPTIONAL_COLUMNS.has(column) && raw === "") {
        row[column] = null;
      } else {
        row[column] = parseNumber(column, raw);
      }
    }
    return row as unknown as SweepRow;
  });
  return { metadata, rows };
}
