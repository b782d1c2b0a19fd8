#!/usr/bin/env node
/** akltsync-figures render --spec figures/fig1.json --out out/ */

import { parseArgs } from "node:util";
import { renderSpec, SpecError } from "./render.js";
import { SchemaError } from "./csv.js";

function main(argv: string[]): number {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      spec: { type: "string" },
      out: { type: "string", default: "figures_out" },
    },
  });
  if (positionals[0] !== "render" || !values.spec) {
    console.error("usage: akltsync-figures render --spec PATH --out DIR");
    return 2;
  }
  try {
    const rendered = renderSpec(values.spec, values.out!);
    for (const r of rendered) {
      console.log(`${r.svgPath}\n${r.pngPath}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SpecError || err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

process.exitCode = main(process.argv.slice(2));
