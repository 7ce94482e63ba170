import { readFileSync } from "fs";
import Papa from "papaparse";

export interface ResultRow {
  realization: number;
  seed: number;
  scheme: string;
  csit: string;
  k: string; // "0".."K-1" or "mc"
  demand: number;
  offered: number;
  mae: number;
  iters: number;
  converged: number;
}

export const RESULTS_COLUMNS = [
  "realization", "seed", "scheme", "csit", "k", "demand", "offered",
  "mae", "iters", "converged",
];

export function readResults(path: string): ResultRow[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== RESULTS_COLUMNS.join(",")) {
    throw new Error(
      `${path}: unexpected results.csv header [${fields.join(",")}]`,
    );
  }
  return parsed.data.map((r) => ({
    realization: Number(r.realization),
    seed: Number(r.seed),
    scheme: r.scheme,
    csit: r.csit,
    k: r.k,
    demand: Number(r.demand),
    offered: Number(r.offered),
    mae: Number(r.mae),
    iters: Number(r.iters),
    converged: Number(r.converged),
  }));
}

export interface TraceRow {
  iter: number;
  residual_f: number;
  residual_v: number;
  objective: number;
  eigenvalue: number;
}

export function readTrace(path: string): TraceRow[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
    dynamicTyping: true,
  });
  const fields = parsed.meta.fields ?? [];
  const expected = "iter,residual_f,residual_v,objective,eigenvalue";
  if (fields.join(",") !== expected) {
    throw new Error(`${path}: unexpected trace.csv header`);
  }
  return parsed.data as unknown as TraceRow[];
}

export interface Sweep {
  axis: string;
  csit: string;
  // axis value -> scheme -> AMAE
  amae: Record<string, Record<string, number>>;
}

export function readSweep(path: string): Sweep {
  const raw = JSON.parse(readFileSync(path, "utf8"));
  if (typeof raw !== "object" || raw === null || !("amae" in raw)) {
    throw new Error(`${path}: not a sweep.json (missing "amae")`);
  }
  return raw as Sweep;
}

export interface Summary {
  [scheme: string]: {
    amae: number | null;
    p95: number | null;
    failed: number;
    cdf: number[];
  };
}

export function readSummary(path: string): Summary {
  return JSON.parse(readFileSync(path, "utf8")) as Summary;
}

export function schemes(rows: ResultRow[]): string[] {
  return [...new Set(rows.map((r) => r.scheme))].sort();
}

export function messageKeys(rows: ResultRow[]): string[] {
  const keys = [...new Set(rows.map((r) => r.k))];
  // unicast indices in numeric order, the multicast row last
  return keys
    .filter((k) => k !== "mc")
    .sort((a, b) => Number(a) - Number(b))
    .concat(keys.includes("mc") ? ["mc"] : []);
}

export function meanOffered(
  rows: ResultRow[], scheme: string, k: string,
): number {
  const sel = rows.filter((r) => r.scheme === scheme && r.k === k);
  if (sel.length === 0) return NaN;
  return sel.reduce((s, r) => s + r.offered, 0) / sel.length;
}
