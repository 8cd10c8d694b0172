// The four standard figures. Every plotted number is read from the
// simulator's documented CSV/JSON outputs; nothing is re-simulated here.

import { readFileSync } from "node:fs";
import { z } from "zod";
import { column, columnsMatching, parseCsv, requireColumns, SchemaError } from "./csv.js";
import { makeScale, PALETTE, SvgCanvas, xRange, yRange } from "./svg.js";

export const figureSpecSchema = z.object({
  kind: z.enum(["balance", "rates", "tails", "smalltime"]),
  input: z.string(),
  aux: z.string().optional(),
  out: z.string(),
  xScale: z.enum(["linear", "log"]).optional(),
  yScale: z.enum(["linear", "log"]).optional(),
});

export type FigureSpec = z.infer<typeof figureSpecSchema>;

const ratesJsonSchema = z.object({
  schema: z.literal("sqgsim-rates/1"),
  rows: z.array(
    z.object({
      p: z.number(),
      predicted_slope: z.number(),
      fitted_slope: z.number(),
      residual: z.number(),
      nus: z.array(z.number()),
      d_values: z.array(z.number()),
    }),
  ),
});

const sweepJsonSchema = z.object({
  schema: z.literal("sqgsim-sweep-result/1"),
  small_time_profile: z.object({
    deltas: z.array(z.number()),
    sup_nu_dissipation: z.array(z.number()),
  }),
});

function drawSeries(
  canvas: SvgCanvas,
  xs: number[],
  ys: number[],
  sx: (v: number) => number,
  sy: (v: number) => number,
  color: string,
  dash = "",
): void {
  canvas.polyline(xs.map(sx), ys.map(sy), color, 1.8, dash);
  for (let i = 0; i < xs.length; i++) {
    canvas.circle(sx(xs[i]), sy(ys[i]), 2.6, color);
  }
}

export function balanceFigure(spec: FigureSpec): string {
  const table = parseCsv(spec.input);
  requireColumns(table, ["t", "hamiltonian", "dissipation_to_t"], spec.input);
  const t = column(table, "t");
  const h = column(table, "hamiltonian");
  const d = column(table, "dissipation_to_t");
  const h0 = h[0];
  if (h0 === 0) throw new SchemaError(`initial hamiltonian is zero in ${spec.input}`);
  // residual of the viscous balance, floored so a log axis stays finite
  const resid = t.map((_, i) => Math.max(Math.abs(h[i] + d[i] - h0) / h0, 1e-18));
  const logY = (spec.yScale ?? "log") === "log";
  const sx = makeScale(t, xRange(), spec.xScale === "log");
  const sy = makeScale(resid, yRange(), logY);
  const canvas = new SvgCanvas();
  canvas.axes(sx, sy, "t", "|H(t) + D(t) - H(0)| / H(0)", "Energy balance residual");
  drawSeries(canvas, t, resid, sx, sy, PALETTE[0]);
  canvas.text(xRange()[0] + 8, yRange()[1] + 14,
    `max residual ${Math.max(...resid).toExponential(2)}`, { size: 11 });
  return canvas.render();
}

export function ratesFigure(spec: FigureSpec): string {
  const table = parseCsv(spec.input);
  requireColumns(table, ["nu", "D"], spec.input);
  if (!spec.aux) throw new SchemaError("rates figure needs --aux rates.json");
  const rates = ratesJsonSchema.parse(JSON.parse(readFileSync(spec.aux, "utf-8")));
  const nu = column(table, "nu");
  const d = column(table, "D");
  // match the sweep to its fit row by the dissipation values it produced
  const row = rates.rows.find((r) =>
    r.d_values.length === d.length &&
    r.d_values.every((v, i) => Math.abs(v - d[i]) <= 1e-9 * Math.max(1, Math.abs(v))),
  );
  if (!row) throw new SchemaError(`no rates.json row matches the sweep in ${spec.input}`);

  const sx = makeScale(nu, xRange(), true);
  const sy = makeScale(d, yRange(), true);
  const canvas = new SvgCanvas();
  canvas.axes(sx, sy, "viscosity", "dissipation D(nu, T)",
    `Dissipation rate, p = ${row.p.toPrecision(3)}`);
  drawSeries(canvas, nu, d, sx, sy, PALETTE[0]);

  // fitted line from the recorded least-squares fit
  const last = nu.length - 1;
  const fitAt = (v: number) => d[last] * Math.pow(v / nu[last], row.fitted_slope);
  canvas.polyline(nu.map(sx), nu.map((v) => sy(fitAt(v))), PALETTE[1], 1.4, "6,3");
  // predicted-slope line anchored through the last point
  const predAt = (v: number) => d[last] * Math.pow(v / nu[last], row.predicted_slope);
  canvas.polyline(nu.map(sx), nu.map((v) => sy(predAt(v))), PALETTE[2], 1.4, "2,3");

  canvas.legend(
    [
      ["measured D", PALETTE[0]],
      [`fitted slope ${row.fitted_slope.toFixed(4)}`, PALETTE[1]],
      [`predicted slope ${row.predicted_slope.toFixed(4)}`, PALETTE[2]],
    ],
    ["", "6,3", "2,3"],
  );
  return canvas.render();
}

export function tailsFigure(spec: FigureSpec): string {
  const table = parseCsv(spec.input);
  requireColumns(table, ["nu", "D"], spec.input);
  const tailCols = columnsMatching(table, "tail_c");
  if (tailCols.length === 0) {
    throw new SchemaError(`missing column "tail_c*" in ${spec.input}`);
  }
  const nu = column(table, "nu");
  const d = column(table, "D");
  const series = tailCols.map((c) => column(table, c));
  const all = d.concat(...series).filter((v) => v > 0);
  const sx = makeScale(nu, xRange(), true);
  const sy = makeScale(all, yRange(), true);
  const canvas = new SvgCanvas();
  canvas.axes(sx, sy, "viscosity", "time-integrated quantity",
    "Dissipation and dissipation-scale tails");
  drawSeries(canvas, nu, d, sx, sy, PALETTE[0]);
  const legend: Array<[string, string]> = [["D(nu, T)", PALETTE[0]]];
  series.forEach((ys, i) => {
    const color = PALETTE[(i + 1) % PALETTE.length];
    const positive = ys.map((v) => Math.max(v, Number.MIN_VALUE));
    drawSeries(canvas, nu, positive, sx, sy, color);
    legend.push([tailCols[i], color]);
  });
  canvas.legend(legend);
  return canvas.render();
}

export function smalltimeFigure(spec: FigureSpec): string {
  const payload = sweepJsonSchema.parse(JSON.parse(readFileSync(spec.input, "utf-8")));
  const { deltas, sup_nu_dissipation: sup } = payload.small_time_profile;
  if (deltas.length === 0) throw new SchemaError(`empty small-time profile in ${spec.input}`);
  const sx = makeScale(deltas, xRange(), false);
  const sy = makeScale(sup, yRange(), false);
  const canvas = new SvgCanvas();
  canvas.axes(sx, sy, "delta", "sup over nu of nu * int_0^delta ||theta||^2",
    "Small-time dissipation profile");
  drawSeries(canvas, deltas, sup, sx, sy, PALETTE[0]);
  return canvas.render();
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "balance":
      return balanceFigure(spec);
    case "rates":
      return ratesFigure(spec);
    case "tails":
      return tailsFigure(spec);
    case "smalltime":
      return smalltimeFigure(spec);
  }
}
