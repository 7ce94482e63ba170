// Minimal deterministic SVG emitter: fixed styling, no timestamps, numbers
// rounded to a fixed precision so output is byte-stable.

export const WIDTH = 720;
export const HEIGHT = 420;
export const MARGIN = { top: 30, right: 130, bottom: 50, left: 60 };

export const PALETTE: Record<string, string> = {
  "gpi-rs": "#1f77b4",
  ldm: "#d62728",
  oum: "#7f7f7f",
  demand: "#2ca02c",
};

export function color(key: string, i: number): string {
  return PALETTE[key] ?? ["#9467bd", "#8c564b", "#e377c2"][i % 3];
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Scale {
  (x: number): number;
  domain: [number, number];
}

export function linearScale(
  domain: [number, number], range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const span = d1 - d0 || 1;
  const f = (x: number) =>
    range[0] + ((x - d0) / span) * (range[1] - range[0]);
  return Object.assign(f, { domain });
}

export function logScale(
  domain: [number, number], range: [number, number],
): Scale {
  const lo = Math.log10(domain[0]);
  const span = Math.log10(domain[1]) - lo || 1;
  const f = (x: number) =>
    range[0] + ((Math.log10(x) - lo) / span) * (range[1] - range[0]);
  return Object.assign(f, { domain });
}

export function ticks(lo: number, hi: number, n = 6): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / n / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export class Svg {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, fill: string,
       opts = ""): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" ` +
      `height="${fmt(h)}" fill="${fill}"${opts ? " " + opts : ""}/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string,
       opts = ""): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" ` +
      `y2="${fmt(y2)}" stroke="${stroke}"${opts ? " " + opts : ""}/>`,
    );
  }

  polyline(pts: Array<[number, number]>, stroke: string, opts = ""): void {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}"` +
      `${opts ? " " + opts : ""}/>`,
    );
  }

  text(x: number, y: number, s: string, opts = ""): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" ` +
      `font-size="11"${opts ? " " + opts : ""}>${esc(s)}</text>`,
    );
  }

  xAxis(scale: Scale, y: number, values: number[],
        label: (v: number) => string): void {
    this.line(MARGIN.left, y, WIDTH - MARGIN.right, y, "#000");
    for (const v of values) {
      const x = scale(v);
      this.line(x, y, x, y + 4, "#000");
      this.text(x, y + 16, label(v), 'text-anchor="middle"');
    }
  }

  yAxis(scale: Scale, values: number[], label: (v: number) => string): void {
    this.line(MARGIN.left, MARGIN.top, MARGIN.left, HEIGHT - MARGIN.bottom,
              "#000");
    for (const v of values) {
      const y = scale(v);
      this.line(MARGIN.left - 4, y, MARGIN.left, y, "#000");
      this.text(MARGIN.left - 6, y + 3, label(v), 'text-anchor="end"');
    }
  }

  legend(entries: Array<[string, string]>, dashed: string[] = []): void {
    const x = WIDTH - MARGIN.right + 12;
    entries.forEach(([name, col], i) => {
      const y = MARGIN.top + 14 * i;
      const dash = dashed.includes(name) ? ' stroke-dasharray="5,3"' : "";
      this.line(x, y, x + 18, y, col, `stroke-width="3"${dash}`);
      this.text(x + 22, y + 3, name);
    });
  }

  title(s: string): void {
    this.text(WIDTH / 2, 16, s, 'text-anchor="middle" font-size="13"');
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}
