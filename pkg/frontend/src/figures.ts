import {
  meanOffered,
  messageKeys,
  readResults,
  readSweep,
  readTrace,
  schemes,
} from "./data.js";
import {
  HEIGHT,
  MARGIN,
  PALETTE,
  Svg,
  WIDTH,
  color,
  linearScale,
  logScale,
  ticks,
} from "./svg.js";

export const FIGURE_KINDS = [
  "rate_bars",
  "rate_portions",
  "mae_cdf",
  "amae_sweep",
  "convergence",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;
const Y0 = HEIGHT - MARGIN.bottom;

function msgLabel(k: string): string {
  return k === "mc" ? "mc" : `uc${k}`;
}

/** Demand bar beside per-scheme mean offered-rate bars, one group per
 * message. */
export function rateBars(input: string): string {
  const rows = readResults(input);
  const keys = messageKeys(rows);
  const schms = schemes(rows);
  const series = ["demand", ...schms];

  const values = keys.map((k) => {
    const demand = rows.find((r) => r.k === k)!.demand;
    return [demand, ...schms.map((s) => meanOffered(rows, s, k))];
  });
  const yMax = Math.max(...values.flat(), 0) * 1.1 || 1;
  const y = linearScale([0, yMax], [Y0, MARGIN.top]);

  const svg = new Svg();
  svg.title("Offered rate per message (mean over realizations)");
  const group = PLOT_W / keys.length;
  const bar = (group * 0.8) / series.length;
  keys.forEach((k, i) => {
    const x0 = MARGIN.left + i * group + group * 0.1;
    values[i].forEach((v, j) => {
      svg.rect(x0 + j * bar, y(v), bar - 1, Y0 - y(v),
               color(series[j], j));
    });
    svg.text(MARGIN.left + (i + 0.5) * group, Y0 + 16, msgLabel(k),
             'text-anchor="middle"');
  });
  svg.yAxis(y, ticks(0, yMax), (v) => v.toFixed(1));
  svg.line(MARGIN.left, Y0, WIDTH - MARGIN.right, Y0, "#000");
  svg.legend(series.map((s, j) => [s, color(s, j)]));
  svg.text(14, HEIGHT / 2, "rate (bps/Hz)",
           `transform="rotate(-90 14 ${HEIGHT / 2})" text-anchor="middle"`);
  return svg.render();
}

/** One stacked bar per scheme: how the offered traffic splits across the
 * multicast message and each unicast message. (The results schema carries
 * per-message totals, not the common/private decomposition inside a
 * message, so the stack is over messages.) */
export function ratePortions(input: string): string {
  const rows = readResults(input);
  const keys = messageKeys(rows);
  const schms = schemes(rows);

  const stacks = schms.map((s) => keys.map((k) => meanOffered(rows, s, k)));
  const yMax = Math.max(...stacks.map((st) => st.reduce((a, b) => a + b, 0)),
                        0) * 1.1 || 1;
  const y = linearScale([0, yMax], [Y0, MARGIN.top]);

  const svg = new Svg();
  svg.title("Offered-rate composition per scheme");
  const group = PLOT_W / schms.length;
  schms.forEach((s, i) => {
    const x0 = MARGIN.left + i * group + group * 0.25;
    let acc = 0;
    stacks[i].forEach((v, j) => {
      const yTop = y(acc + v);
      svg.rect(x0, yTop, group * 0.5, y(acc) - yTop,
               j === keys.length - 1 ? PALETTE.demand : color(String(j), j),
               `stroke="#ffffff" stroke-width="0.5"`);
      acc += v;
    });
    svg.text(MARGIN.left + (i + 0.5) * group, Y0 + 16, s,
             'text-anchor="middle"');
  });
  svg.yAxis(y, ticks(0, yMax), (v) => v.toFixed(1));
  svg.line(MARGIN.left, Y0, WIDTH - MARGIN.right, Y0, "#000");
  svg.legend(keys.map((k, j) => [
    msgLabel(k),
    k === "mc" ? PALETTE.demand : color(String(j), j),
  ]));
  svg.text(14, HEIGHT / 2, "rate (bps/Hz)",
           `transform="rotate(-90 14 ${HEIGHT / 2})" text-anchor="middle"`);
  return svg.render();
}

/** Empirical CDF of the per-realization MAE, one curve per scheme. */
export function maeCdf(input: string): string {
  const rows = readResults(input);
  const schms = schemes(rows);
  // one MAE per (realization, scheme); every message row repeats it
  const perScheme = schms.map((s) => {
    const seen = new Map<number, number>();
    rows.filter((r) => r.scheme === s).forEach((r) =>
      seen.set(r.realization, r.mae));
    return [...seen.values()].sort((a, b) => a - b);
  });
  const xMax = Math.max(...perScheme.flat(), 0) * 1.05 || 1;
  const x = linearScale([0, xMax], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, 1], [Y0, MARGIN.top]);

  const svg = new Svg();
  svg.title("CDF of the mean absolute rate-matching error");
  schms.forEach((s, i) => {
    const maes = perScheme[i];
    const pts: Array<[number, number]> = [[x(0), y(0)]];
    maes.forEach((m, j) => {
      pts.push([x(m), y(j / maes.length)]);
      pts.push([x(m), y((j + 1) / maes.length)]);
    });
    pts.push([x(xMax), y(1)]);
    svg.polyline(pts, color(s, i), 'stroke-width="2"');
  });
  svg.xAxis(x, Y0, ticks(0, xMax), (v) => v.toFixed(2));
  svg.yAxis(y, ticks(0, 1), (v) => v.toFixed(1));
  svg.legend(schms.map((s, i) => [s, color(s, i)]));
  svg.text(WIDTH / 2, HEIGHT - 8, "MAE (bps/Hz)", 'text-anchor="middle"');
  return svg.render();
}

/** AMAE across a sweep axis; statistical-CSIT series drawn dashed. */
export function amaeSweep(input: string): string {
  const sweep = readSweep(input);
  // keep original JSON keys for lookup; "1.0" would not survive a
  // Number -> String round trip
  const entries = Object.keys(sweep.amae)
    .map((key): [number, string] => [Number(key), key])
    .sort((a, b) => a[0] - b[0]);
  const svg = new Svg();
  svg.title(`AMAE vs ${sweep.axis} (${sweep.csit} CSIT)`);
  if (entries.length === 0) {
    console.warn("amae_sweep: empty sweep input, drawing bare axes");
    const x = linearScale([0, 1], [MARGIN.left, WIDTH - MARGIN.right]);
    const y = linearScale([0, 1], [Y0, MARGIN.top]);
    svg.xAxis(x, Y0, ticks(0, 1), (v) => v.toFixed(1));
    svg.yAxis(y, ticks(0, 1), (v) => v.toFixed(1));
    return svg.render();
  }
  const schms = [...new Set(entries.flatMap(([, key]) =>
    Object.keys(sweep.amae[key])))].sort();
  const yMax = Math.max(...entries.flatMap(([, key]) =>
    Object.values(sweep.amae[key]))) * 1.1 || 1;
  const x = linearScale([entries[0][0], entries[entries.length - 1][0]],
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, yMax], [Y0, MARGIN.top]);
  const dash = sweep.csit === "statistical" ? ' stroke-dasharray="5,3"' : "";
  schms.forEach((s, i) => {
    const pts = entries.map(([v, key]): [number, number] =>
      [x(v), y(sweep.amae[key][s])]);
    svg.polyline(pts, color(s, i), `stroke-width="2"${dash}`);
  });
  svg.xAxis(x, Y0, entries.map(([v]) => v), (v) => String(v));
  svg.yAxis(y, ticks(0, yMax), (v) => v.toFixed(2));
  svg.legend(schms.map((s, i): [string, string] => [s, color(s, i)]),
             sweep.csit === "statistical" ? schms : []);
  svg.text(WIDTH / 2, HEIGHT - 8, sweep.axis, 'text-anchor="middle"');
  return svg.render();
}

/** Per-iteration update residuals on a log axis. */
export function convergence(input: string): string {
  const trace = readTrace(input);
  const series: Array<[keyof typeof PALETTE & string, string]> = [];
  const svg = new Svg();
  svg.title("Solver convergence");
  const lo = Math.min(...trace.flatMap((t) =>
    [t.residual_f, t.residual_v].filter((v) => v > 0)));
  const hi = Math.max(...trace.flatMap((t) => [t.residual_f, t.residual_v]));
  const x = linearScale([1, trace[trace.length - 1].iter],
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = logScale([lo, hi], [Y0, MARGIN.top]);
  const curves: Array<["residual_f" | "residual_v", string]> = [
    ["residual_f", "#1f77b4"],
    ["residual_v", "#d62728"],
  ];
  for (const [field, col] of curves) {
    const pts = trace.filter((t) => t[field] > 0)
      .map((t): [number, number] => [x(t.iter), y(t[field])]);
    svg.polyline(pts, col, 'stroke-width="2"');
    series.push([field, col]);
  }
  svg.xAxis(x, Y0, ticks(1, trace[trace.length - 1].iter, 8)
    .filter((v) => v >= 1), (v) => String(Math.round(v)));
  const decades: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi));
       e++) {
    decades.push(Math.pow(10, e));
  }
  svg.yAxis(y, decades, (v) => `1e${Math.round(Math.log10(v))}`);
  svg.legend(series);
  svg.text(WIDTH / 2, HEIGHT - 8, "iteration", 'text-anchor="middle"');
  return svg.render();
}

export function renderFigure(kind: FigureKind, input: string): string {
  switch (kind) {
    case "rate_bars":
      return rateBars(input);
    case "rate_portions":
      return ratePortions(input);
    case "mae_cdf":
      return maeCdf(input);
    case "amae_sweep":
      return amaeSweep(input);
    case "convergence":
      return convergence(input);
  }
}
