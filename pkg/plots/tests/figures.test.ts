import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import {
  balanceFigure,
  ratesFigure,
  smalltimeFigure,
  tailsFigure,
} from "../src/figures.js";
import { main } from "../src/main.js";

const FIXTURES = join(__dirname, "fixtures");
const RUN_CSV = join(FIXTURES, "run", "diagnostics.csv");
const RATES_JSON = join(FIXTURES, "rates", "rates.json");
const SWEEP_CSV = join(FIXTURES, "sweep", "sweep.csv");
const SWEEP_JSON = join(FIXTURES, "sweep", "sweep.json");

// acceptance tolerances for the fitted-vs-predicted agreement per p
const SLOPE_TOLERANCE: Array<[number, number]> = [
  [1.6, 0.05 * 0.5],
  [2.0, 0.05 * 1.0],
  [4 / 3, 0.05],
];

describe("rates figure", () => {
  it("annotates fitted and predicted slopes that agree within tolerance", () => {
    const rates = JSON.parse(readFileSync(RATES_JSON, "utf-8"));
    for (const [p, tol] of SLOPE_TOLERANCE) {
      const row = rates.rows.find((r: { p: number }) => Math.abs(r.p - p) < 1e-9);
      expect(row, `rates.json row for p=${p}`).toBeDefined();
      expect(Math.abs(row.fitted_slope - row.predicted_slope)).toBeLessThan(tol);
    }
    const svg = ratesFigure({
      kind: "rates",
      input: join(FIXTURES, "rates", "sweep_p1_6.csv"),
      aux: RATES_JSON,
      out: "unused.svg",
    });
    expect(svg).toContain("fitted slope 0.5000");
    expect(svg).toContain("predicted slope 0.5000");
    expect(svg).toContain("<svg");
  });

  it("renders every criterion sweep CSV", () => {
    for (const name of ["sweep_p1_6.csv", "sweep_p2.csv", "sweep_p1_33333.csv"]) {
      const svg = ratesFigure({
        kind: "rates",
        input: join(FIXTURES, "rates", name),
        aux: RATES_JSON,
        out: "unused.svg",
      });
      expect(svg).toContain("predicted slope");
    }
  });

  it("requires the aux table", () => {
    expect(() =>
      ratesFigure({ kind: "rates", input: SWEEP_CSV, out: "x.svg" }),
    ).toThrow(/aux/);
  });
});

describe("balance figure", () => {
  it("renders the residual series from a run CSV", () => {
    const svg = balanceFigure({ kind: "balance", input: RUN_CSV, out: "x.svg" });
    expect(svg).toContain("Energy balance residual");
    expect(svg).toContain("max residual");
    expect((svg.match(/<circle/g) ?? []).length).toBe(101);
  });
});

describe("tails figure", () => {
  it("shows monotone co-decay from the mollified sweep", () => {
    const svg = tailsFigure({ kind: "tails", input: SWEEP_CSV, out: "x.svg" });
    expect(svg).toContain("tail_c1");
    expect(svg).toContain("D(nu, T)");
  });

  it("names a missing tail column", () => {
    expect(() =>
      tailsFigure({ kind: "tails", input: RUN_CSV, out: "x.svg" }),
    ).toThrow(/missing column "nu"/);
  });
});

describe("smalltime figure", () => {
  it("renders the profile from sweep.json", () => {
    const svg = smalltimeFigure({ kind: "smalltime", input: SWEEP_JSON, out: "x.svg" });
    expect(svg).toContain("Small-time dissipation profile");
  });
});

describe("cli", () => {
  it("exits 0 on all documented inputs and writes deterministic SVG", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const jobs: string[][] = [
      ["--kind", "balance", "--input", RUN_CSV, "--out", join(dir, "balance.svg")],
      ["--kind", "rates", "--input", join(FIXTURES, "rates", "sweep_p2.csv"),
        "--aux", RATES_JSON, "--out", join(dir, "rates.svg")],
      ["--kind", "tails", "--input", SWEEP_CSV, "--out", join(dir, "tails.svg")],
      ["--kind", "smalltime", "--input", SWEEP_JSON, "--out", join(dir, "small.svg")],
    ];
    for (const argv of jobs) {
      expect(main(argv)).toBe(0);
    }
    const first = readFileSync(join(dir, "rates.svg"), "utf-8");
    expect(main(jobs[1])).toBe(0);
    expect(readFileSync(join(dir, "rates.svg"), "utf-8")).toBe(first);
  });

  it("exits 1 on a missing file", () => {
    expect(main(["--kind", "balance", "--input", "nope.csv", "--out", "x.svg"])).toBe(1);
  });

  it("exits 1 on an unknown kind", () => {
    expect(main(["--kind", "pie", "--input", RUN_CSV, "--out", "x.svg"])).toBe(1);
  });
});
