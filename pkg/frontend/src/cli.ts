#!/usr/bin/env node
import { pathToFileURL } from "url";

import { loadFigureSpec } from "./figure.js";
import { renderToFiles } from "./render.js";
import { SchemaError } from "./schema.js";

const USAGE = "usage: mixadc-figures render --spec <figure.json> --out <figure.svg|png>";

export async function main(argv: string[]): Promise<number> {
  if (argv[0] !== "render") {
    process.stderr.write(USAGE + "\n");
    return 2;
  }
  let specPath: string | undefined;
  let outPath: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      process.stderr.write(`missing value for ${flag}\n${USAGE}\n`);
      return 2;
    }
    if (flag === "--spec") specPath = value;
    else if (flag === "--out") outPath = value;
    else {
      process.stderr.write(`unknown flag ${flag}\n${USAGE}\n`);
      return 2;
    }
  }
  if (!specPath) {
    process.stderr.write(`--spec is required\n${USAGE}\n`);
    return 2;
  }
  try {
    const spec = loadFigureSpec(specPath);
    if (outPath) spec.output = outPath;
    const files = await renderToFiles(spec);
    process.stdout.write(`wrote ${files.svgPath} and ${files.pngPath}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
