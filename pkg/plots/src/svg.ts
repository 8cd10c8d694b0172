// Minimal deterministic SVG rendering: fixed canvas, fixed styles, no DOM.
// Coordinates are rounded to 1/100 px so output bytes are reproducible.

export interface Scale {
  (v: number): number;
  ticks(): number[];
  readonly log: boolean;
}

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 24, top: 40, bottom: 52 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = (span / n) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) out.push(v);
  return out;
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = Math.pow(10, e);
    if (v >= lo / 1.0001 && v <= hi * 1.0001) out.push(v);
  }
  return out.length >= 2 ? out : [lo, hi];
}

export function makeScale(values: number[], range: [number, number], log: boolean): Scale {
  const finite = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= lo === 0 ? 1 : Math.abs(lo) * 0.5;
    hi += hi === 0 ? 1 : Math.abs(hi) * 0.5;
  }
  const [r0, r1] = range;
  const f = (v: number) => {
    const t = log
      ? (Math.log10(v) - Math.log10(lo)) / (Math.log10(hi) - Math.log10(lo))
      : (v - lo) / (hi - lo);
    return r0 + t * (r1 - r0);
  };
  const scale = f as Scale;
  (scale as { ticks?: () => number[] }).ticks = () =>
    log ? logTicks(lo, hi) : niceTicks(lo, hi);
  Object.defineProperty(scale, "log", { value: log });
  return scale;
}

export function xRange(): [number, number] {
  return [MARGIN.left, WIDTH - MARGIN.right];
}

export function yRange(): [number, number] {
  return [HEIGHT - MARGIN.bottom, MARGIN.top];
}

const px = (v: number) => v.toFixed(2);

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) return String(Number(v.toPrecision(4)));
  return v.toExponential(0).replace("e", "e");
}

export class SvgCanvas {
  private parts: string[] = [];

  polyline(xs: number[], ys: number[], color: string, width = 1.8, dash = ""): void {
    const pts = xs.map((x, i) => `${px(x)},${px(ys[i])}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"${d}/>`,
    );
  }

  circle(x: number, y: number, r: number, color: string): void {
    this.parts.push(`<circle cx="${px(x)}" cy="${px(y)}" r="${r}" fill="${color}"/>`);
  }

  text(x: number, y: number, s: string, opts: { anchor?: string; size?: number; color?: string } = {}): void {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 12;
    const color = opts.color ?? "#222";
    this.parts.push(
      `<text x="${px(x)}" y="${px(y)}" font-family="Helvetica,Arial,sans-serif" ` +
      `font-size="${size}" fill="${color}" text-anchor="${anchor}">${escapeXml(s)}</text>`,
    );
  }

  axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string, title: string): void {
    const [x0, x1] = xRange();
    const [y0, y1] = yRange();
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#222" stroke-width="1"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#222" stroke-width="1"/>`,
    );
    for (const t of xs.ticks()) {
      const x = xs(t);
      this.parts.push(`<line x1="${px(x)}" y1="${y0}" x2="${px(x)}" y2="${y0 + 5}" stroke="#222"/>`);
      this.text(x, y0 + 20, fmtTick(t), { anchor: "middle", size: 11 });
    }
    for (const t of ys.ticks()) {
      const y = ys(t);
      this.parts.push(`<line x1="${x0 - 5}" y1="${px(y)}" x2="${x0}" y2="${px(y)}" stroke="#222"/>`);
      this.text(x0 - 9, y + 4, fmtTick(t), { anchor: "end", size: 11 });
    }
    this.text((x0 + x1) / 2, HEIGHT - 12, xLabel, { anchor: "middle" });
    this.parts.push(
      `<text x="16" y="${(y0 + y1) / 2}" font-family="Helvetica,Arial,sans-serif" font-size="12" ` +
      `fill="#222" text-anchor="middle" transform="rotate(-90 16 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
    );
    this.text((x0 + x1) / 2, 22, title, { anchor: "middle", size: 14 });
  }

  legend(entries: Array<[string, string]>, dash: string[] = []): void {
    const [, x1] = xRange();
    let y = yRange()[1] + 14;
    for (let i = 0; i < entries.length; i++) {
      const [label, color] = entries[i];
      const d = dash[i] ? ` stroke-dasharray="${dash[i]}"` : "";
      this.parts.push(
        `<line x1="${x1 - 150}" y1="${y - 4}" x2="${x1 - 122}" y2="${y - 4}" ` +
        `stroke="${color}" stroke-width="2"${d}/>`,
      );
      this.text(x1 - 116, y, label, { size: 11 });
      y += 16;
    }
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
