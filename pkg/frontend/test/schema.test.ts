import { readFileSync } from "fs";
import { join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";

import { parseSweepCsv, SchemaError } from "../src/schema.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

describe("parseSweepCsv", () => {
  it("parses a real sweep output with metadata", () => {
    const csv = parseSweepCsv(fixture("criterion1.csv"));
    expect(csv.metadata["kind"]).toBe("rate-vs-pu");
    expect(csv.metadata["seed"]).toBe("1");
    // 5 power levels x 4 cases x (analytic + mc)
    expect(csv.rows).toHaveLength(40);
    const first = csv.rows[0];
    expect(first.M).toBe(200);
    expect(typeof first.sum_rate_bpshz).toBe("number");
  });

  it("separates analytic and monte carlo rows", () => {
    const csv = parseSweepCsv(fixture("criterion1.csv"));
    const analytic = csv.rows.filter((r) => r.method.startsWith("analytic"));
    const mc = csv.rows.filter((r) => r.method.startsWith("mc"));
    expect(analytic).toHaveLength(20);
    expect(mc).toHaveLength(20);
    expect(mc.every((r) => r.stderr_bpshz !== null)).toBe(true);
    expect(analytic.every((r) => r.stderr_bpshz === null)).toBe(true);
  });

  it("parses dB infinities", () => {
    const csv = parseSweepCsv(fixture("tradeoff-ee-rate.csv"));
    const rayleigh = csv.rows.filter((r) => r.K_db === -Infinity);
    expect(rayleigh.length).toBeGreaterThan(0);
  });

  it("names the missing column", () => {
    const text = fixture("criterion1.csv").replace("kappa,", "capa,");
    expect(() => parseSweepCsv(text)).toThrow(SchemaError);
    expect(() => parseSweepCsv(text)).toThrow(/missing required column "kappa"/);
  });

  it("rejects empty input", () => {
    expect(() => parseSweepCsv("")).toThrow(/no CSV header/);
  });

  it("rejects a header with no rows", () => {
    const header = fixture("criterion1.csv")
      .split("\n")
      .find((line) => line.startsWith("sweep_kind"))!;
    expect(() => parseSweepCsv(header + "\n")).toThrow(/no data rows/);
  });

  it("rejects corrupted numeric cells", () => {
    const text = fixture("criterion1.csv").replace(/200,200,0,10,1/, "200,abc,0,10,1");
    expect(() => parseSweepCsv(text)).toThrow(/non-numeric/);
  });
});
