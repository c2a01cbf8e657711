import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import test from "node:test";

import { parseTrace, TraceFormatError, TRACE_HEADER } from "../src/csv.js";
import { parseReference, ReferenceFormatError } from "../src/reference.js";

const FIXTURES = join(import.meta.dirname, "..", "..", "tests", "fixtures");

test("parses a compare-mode trace", () => {
  const rows = parseTrace(readFileSync(join(FIXTURES, "compare", "free-fista.csv"), "utf8"));
  assert.ok(rows.length > 50);
  assert.equal(rows[0]!.algo, "free-fista");
  assert.equal(rows[0]!.globalIter, 1);
  // accepted iterations count up without gaps
  rows.forEach((r, i) => assert.equal(r.globalIter, i + 1));
  assert.ok(rows.every((r) => Number.isFinite(r.fValue)));
});

test("nan cells parse as NaN", () => {
  const text = `${TRACE_HEADER}\nfista,0,1,0,0.5,2,nan,0,1.25,nan,0.001\n`;
  const rows = parseTrace(text);
  assert.ok(Number.isNaN(rows[0]!.kappaEst));
  assert.ok(Number.isNaN(rows[0]!.gNorm));
});

test("rejects a wrong header", () => {
  assert.throws(() => parseTrace("a,b,c\n1,2,3\n"), TraceFormatError);
});

test("rejects a short row with its line number", () => {
  const text = `${TRACE_HEADER}\nfista,0,1\n`;
  assert.throws(() => parseTrace(text, "t.csv"), /t\.csv:2/);
});

test("rejects a header-only file", () => {
  assert.throws(() => parseTrace(`${TRACE_HEADER}\n`), /no data rows/);
});

test("rejects garbage numerics", () => {
  const text = `${TRACE_HEADER}\nfista,0,1,0,zap,2,nan,0,1.25,0.5,0.001\n`;
  assert.throws(() => parseTrace(text), /bad numeric/);
});

test("parses reference files with optional keys", () => {
  const entry = parseReference(readFileSync(join(FIXTURES, "quad.ref"), "utf8"));
  assert.ok(Number.isFinite(entry.fHat));
  assert.ok(entry.lHat !== undefined && entry.lHat > 0);
  assert.ok(entry.dist0 !== undefined && entry.dist0 > 0);
  assert.ok(entry.problemKey!.startsWith("quadratic:"));
});

test("reference without F_hat is an error", () => {
  assert.throws(() => parseReference("budget = 10\n"), ReferenceFormatError);
});
