// Strict reader for the simulator's CSV outputs. The files are written by a
// known producer (comma-separated numerics, no quoting), so anything
// surprising is treated as a schema violation, never silently coerced.

import { readFileSync } from "node:fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseCsv(path: string): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`empty CSV file: ${path}`);
  }
  const columns = lines[0].split(",");
  if (lines.length === 1) {
    throw new SchemaError(`CSV has a header but no data rows: ${path}`);
  }
  const rows = lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 2} of ${path} has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    return parts.map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`non-numeric value ${JSON.stringify(p)} in ${path}`);
      }
      return v;
    });
  });
  return { columns, rows };
}

export function requireColumns(table: Table, needed: string[], path: string): void {
  for (const c of needed) {
    if (!table.columns.includes(c)) {
      throw new SchemaError(`missing column "${c}" in ${path}`);
    }
  }
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column "${name}"`);
  }
  return table.rows.map((r) => r[idx]);
}

export function columnsMatching(table: Table, prefix: string): string[] {
  return table.columns.filter((c) => c.startsWith(prefix));
}
