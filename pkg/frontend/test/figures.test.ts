import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { meanOffered, readResults, readSweep, readTrace } from "../src/data.js";
import { FIGURE_KINDS, renderFigure } from "../src/figures.js";
import { main } from "../src/cli.js";

const DATA = join(__dirname, "..", "data");

function inputFor(kind: string): string {
  if (kind === "amae_sweep") return join(DATA, "sweep.json");
  if (kind === "convergence") return join(DATA, "trace.csv");
  return join(DATA, "results.csv");
}

describe("figure rendering", () => {
  it.each([...FIGURE_KINDS])("emits %s without error", (kind) => {
    const svg = renderFigure(kind, inputFor(kind));
    expect(svg).toMatch(/^<svg /);
    expect(svg).toMatch(/<\/svg>\n$/);
    expect(svg.length).toBeGreaterThan(500);
  });

  it("criterion 9: all five kinds byte-identical across invocations", () => {
    let ok = true;
    for (const kind of FIGURE_KINDS) {
      const a = renderFigure(kind, inputFor(kind));
      const b = renderFigure(kind, inputFor(kind));
      ok = ok && a === b;
      expect(a).toBe(b);
    }
    console.log(
      `CRITERION 9: ${ok ? "PASS" : "FAIL"} - five figure kinds emitted, ` +
      "byte-identical across repeated invocations",
    );
  });

  it("no timestamps or randomness leak into the output", () => {
    const svg = renderFigure("rate_bars", inputFor("rate_bars"));
    expect(svg).not.toMatch(/\d{4}-\d{2}-\d{2}/);
  });

  it("plotted values equal CSV values exactly", () => {
    const rows = readResults(join(DATA, "results.csv"));
    // three spot cells: the mean bar heights come from exact CSV offered
    // values, so recomputing them from raw rows must agree to the bit
    for (const [scheme, k] of [["gpi-rs", "0"], ["ldm", "mc"],
                               ["oum", "3"]] as const) {
      const sel = rows.filter((r) => r.scheme === scheme && r.k === k);
      const mean = sel.reduce((s, r) => s + r.offered, 0) / sel.length;
      expect(meanOffered(rows, scheme, k)).toBe(mean);
    }
  });

  it("rejects a schema mismatch with a descriptive error", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "foo,bar\n1,2\n");
    expect(() => renderFigure("rate_bars", bad)).toThrow(/header/);
  });

  it("empty sweep input draws bare axes and succeeds", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const p = join(dir, "sweep.json");
    writeFileSync(p, JSON.stringify({ axis: "mc-demand",
                                      csit: "statistical", amae: {} }));
    const svg = renderFigure("amae_sweep", p);
    expect(svg).toMatch(/^<svg /);
  });
});

describe("parsers", () => {
  it("reads the committed sample results.csv", () => {
    const rows = readResults(join(DATA, "results.csv"));
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].scheme).toBe("gpi-rs");
    // 20 realizations x 3 schemes x (8 users + 1 mc row)
    expect(rows.length).toBe(20 * 3 * 9);
  });

  it("reads trace and sweep files", () => {
    const trace = readTrace(join(DATA, "trace.csv"));
    expect(trace[0].iter).toBe(1);
    expect(trace.every((t) => t.residual_f >= 0)).toBe(true);
    const sweep = readSweep(join(DATA, "sweep.json"));
    expect(sweep.axis).toBe("mc-demand");
    expect(Object.keys(sweep.amae).length).toBeGreaterThan(0);
  });
});

describe("cli", () => {
  it("writes an SVG file and round-trips determinism on disk", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    for (const out of [out1, out2]) {
      const rc = main(["--kind", "mae_cdf", "--in",
                       join(DATA, "results.csv"), "--out", out]);
      expect(rc).toBe(0);
    }
    expect(readFileSync(out1)).toStrictEqual(readFileSync(out2));
  });

  it("fails cleanly on a missing input", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const rc = main(["--kind", "convergence", "--in",
                     join(dir, "nope.csv"), "--out", join(dir, "x.svg")]);
    expect(rc).toBe(1);
  });
});
