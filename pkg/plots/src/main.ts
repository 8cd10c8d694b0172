// CLI: render one figure from simulator outputs.
//
//   node dist/main.js --kind rates --input sweep_p1_6.csv --aux rates.json --out fig.svg
//
// Exits 0 on success; any schema or file problem prints a message naming the
// offender and exits 1.

import { writeFileSync } from "node:fs";
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { figureSpecSchema, renderFigure, type FigureSpec } from "./figures.js";

export function parseArgs(argv: string[]): FigureSpec {
  const flags: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`flags come in --name value pairs, got ${JSON.stringify(argv)}`);
    }
    flags[key.slice(2)] = value;
  }
  return figureSpecSchema.parse({
    kind: flags["kind"],
    input: flags["input"],
    aux: flags["aux"],
    out: flags["out"],
    xScale: flags["x-scale"],
    yScale: flags["y-scale"],
  });
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`invalid figure spec: ${(err as Error).message}`);
    return 1;
  }
  try {
    const svg = renderFigure(spec);
    writeFileSync(spec.out, svg);
    console.log(`wrote ${spec.out}`);
    return 0;
  } catch (err) {
    console.error(`${spec.kind} figure failed: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && fileURLToPath(import.meta.url) === resolve(process.argv[1]);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
