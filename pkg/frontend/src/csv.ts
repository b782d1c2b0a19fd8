/**
 * Reader for the CSV artifacts the simulation CLI emits: '#'-prefixed
 * comment lines (config hash etc.), one header row, 17-significant-digit
 * numbers.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface CsvTable {
  columns: Map<string, number[]>;
  comments: string[];
  rows: number;
}

export class SchemaError extends Error {}

export function parseCsv(path: string): CsvTable {
  const text = readFileSync(path, "utf-8");
  const comments = text
    .split("\n")
    .filter((line) => line.startsWith("#"))
    .map((line) => line.slice(1).trim());

  const parsed = Papa.parse<string[]>(text, {
    comments: "#",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new SchemaError(`${path}: no header row`);
  }
  const header = data[0];
  const body = data.slice(1);
  if (body.length === 0) {
    throw new SchemaError(`${path}: empty table (header only)`);
  }
  const columns = new Map<string, number[]>();
  header.forEach((name, k) => {
    columns.set(
      name,
      body.map((row) => Number(row[k])),
    );
  });
  return { columns, comments, rows: body.length };
}

export function requireColumn(table: CsvTable, name: string, path = ""): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new SchemaError(
      `${path}: missing column '${name}' (have: ${[...table.columns.keys()].join(", ")})`,
    );
  }
  return col;
}

/** Site columns Sx_1..Sx_N in site order. */
export function siteColumns(table: CsvTable, prefix = "Sx_"): string[] {
  const names = [...table.columns.keys()]
    .filter((n) => n.startsWith(prefix))
    .sort((a, b) => Number(a.slice(prefix.length)) - Number(b.slice(prefix.length)));
  if (names.length === 0) {
    throw new SchemaError(`no '${prefix}*' site columns found`);
  }
  return names;
}
