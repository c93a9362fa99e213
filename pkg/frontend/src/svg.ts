/** Deterministic SVG building blocks: fixed formatting, no ids, no time. */

export function fmt(value: number): string {
  // fixed precision keeps reruns byte-identical across platforms
  const text = value.toFixed(2);
  return text === "-0.00" ? "0.00" : text;
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

function tickStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const magnitude = Math.pow(10, Math.floor(Math.log10(raw)));
  const residual = raw / magnitude;
  if (residual >= 5) return 10 * magnitude;
  if (residual >= 2) return 5 * magnitude;
  if (residual >= 1) return 2 * magnitude;
  return magnitude;
}

export function linearTicks(min: number, max: number, target = 6): number[] {
  if (!(max > min)) return [min];
  const step = tickStep(max - min, target);
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  const lo = Math.floor(Math.log10(min));
  const hi = Math.ceil(Math.log10(max));
  for (let e = lo; e <= hi; e += 1) {
    const v = Math.pow(10, e);
    if (v >= min / (1 + 1e-9) && v <= max * (1 + 1e-9)) ticks.push(v);
  }
  return ticks.length >= 2 ? ticks : [min, max];
}

export function makeScale(
  kind: "linear" | "log",
  domain: [number, number],
  range: [number, number],
): Scale {
  let [d0, d1] = domain;
  if (kind === "log" && d0 <= 0) {
    throw new Error("log scale requires positive values");
  }
  if (d0 === d1) {
    // degenerate single-value domain: pad symmetrically
    const pad = d0 === 0 ? 1 : Math.abs(d0) * 0.1;
    d0 -= pad;
    d1 += pad;
  }
  const [r0, r1] = range;
  const transform = kind === "log" ? Math.log10 : (v: number) => v;
  const t0 = transform(d0);
  const t1 = transform(d1);
  const scale = ((value: number) => r0 + ((transform(value) - t0) / (t1 - t0)) * (r1 - r0)) as Scale;
  scale.ticks = kind === "log" ? logTicks(d0, d1) : linearTicks(d0, d1);
  return scale;
}

export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e5 || magnitude < 1e-3) {
    return value.toExponential(1).replace("e+", "e");
  }
  const rounded = Number(value.toPrecision(6));
  return String(rounded);
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function polylinePath(points: Array<[number, number]>): string {
  return points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`).join(" ");
}

export const DASH_PATTERNS: Record<string, string> = {
  solid: "",
  dashed: "8 4",
  dotted: "2 3",
  dashdot: "8 3 2 3",
};

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];
