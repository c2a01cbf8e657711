/**
 * CLI: plot --kind <kind> [--ref <path>] --out <path> <csv>...
 *
 * Kinds: value_vs_iters, value_vs_time, L_vs_iters, backtracks_vs_iters.
 * Exit codes: 0 success, 2 usage/figure error, 4 input parse error.
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { pathToFileURL } from "node:url";

import { parseTrace, TraceFormatError } from "./csv.js";
import { buildFigure, FIGURE_KINDS, FigureError, FigureKind } from "./figures.js";
import { parseReference, ReferenceEntry, ReferenceFormatError } from "./reference.js";
import { renderChart } from "./svg.js";

interface CliArgs {
  kind: FigureKind;
  out: string;
  ref?: string;
  inputs: string[];
}

function usage(): string {
  return (
    "usage: plot --kind <" +
    FIGURE_KINDS.join("|") +
    "> [--ref <reference-file>] --out <figure.svg> <trace.csv>..."
  );
}

export function parseArgs(argv: string[]): CliArgs {
  const args = [...argv];
  if (args[0] === "plot") args.shift();
  let kind: string | undefined;
  let out: string | undefined;
  let ref: string | undefined;
  const inputs: string[] = [];
  while (args.length > 0) {
    const a = args.shift()!;
    if (a === "--kind") kind = args.shift();
    else if (a === "--out") out = args.shift();
    else if (a === "--ref") ref = args.shift();
    else if (a.startsWith("--")) throw new FigureError(`unknown flag ${a}\n${usage()}`);
    else inputs.push(a);
  }
  if (kind === undefined || out === undefined || inputs.length === 0) {
    throw new FigureError(usage());
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new FigureError(`unknown kind ${JSON.stringify(kind)}\n${usage()}`);
  }
  const parsed: CliArgs = { kind: kind as FigureKind, out, inputs };
  if (ref !== undefined) parsed.ref = ref;
  return parsed;
}

export function runCli(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const traces = args.inputs.map((path) => ({
      source: basename(path),
      rows: parseTrace(readFileSync(path, "utf8"), path),
    }));
    let reference: ReferenceEntry | undefined;
    if (args.ref !== undefined) {
      reference = parseReference(readFileSync(args.ref, "utf8"), args.ref);
    }
    const figureInputs =
      reference === undefined
        ? { kind: args.kind, traces }
        : { kind: args.kind, traces, reference };
    const svg = renderChart(buildFigure(figureInputs));
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof TraceFormatError || err instanceof ReferenceFormatError) {
      console.error(`parse error: ${err.message}`);
      return 4;
    }
    if (err instanceof FigureError) {
      console.error(`figure error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const isMain = (() => {
  if (process.argv[1] === undefined) return false;
  try {
    // realpath resolves the symlink that npm installs for bin entries
    return pathToFileURL(realpathSync(process.argv[1])).href === import.meta.url;
  } catch {
    return false;
  }
})();
if (isMain) {
  process.exit(runCli(process.argv.slice(2)));
}
