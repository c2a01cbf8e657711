/**
 * The four figure kinds built from harness traces:
 *
 *   value_vs_iters       log(F - F_hat) against accepted iterations
 *   value_vs_time        log(F - F_hat) against wall time
 *   L_vs_iters           step Lipschitz estimates against iterations
 *   backtracks_vs_iters  rejected passes per accepted iteration
 *
 * Value figures require a reference entry; when the reference also
 * carries L_hat and the starting distance, a dashed 2*L*d0^2/(k+1)^2
 * envelope is overlaid.
 */

import { TraceRow } from "./csv.js";
import { ReferenceEntry } from "./reference.js";
import { ChartSpec, Series } from "./svg.js";

export const FIGURE_KINDS = [
  "value_vs_iters",
  "value_vs_time",
  "L_vs_iters",
  "backtracks_vs_iters",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureInputs {
  kind: FigureKind;
  traces: { source: string; rows: TraceRow[] }[];
  reference?: ReferenceEntry;
  warn?: (msg: string) => void;
}

export class FigureError extends Error {}

function seriesLabel(rows: TraceRow[], source: string): string {
  return rows[0]?.algo ?? source;
}

// Gap values at or below the reference would be unplottable on a log
// axis; they mean the reference is only marginally deeper than the
// run, so clamp to a floor relative to the largest gap and say so.
function gapSeries(
  rows: TraceRow[],
  fHat: number,
  label: string,
  warn: (msg: string) => void,
): number[] {
  const gaps = rows.map((r) => r.fValue - fHat);
  const maxGap = Math.max(...gaps);
  if (maxGap <= 0) {
    throw new FigureError(`every value in ${label} is at or below the reference`);
  }
  const floor = maxGap * 1e-16;
  let clamped = 0;
  const out = gaps.map((g) => {
    if (g < floor) {
      clamped += 1;
      return floor;
    }
    return g;
  });
  if (clamped > 0) {
    warn(`${label}: clamped ${clamped} value(s) at or below the reference`);
  }
  return out;
}

export function buildFigure(inputs: FigureInputs): ChartSpec {
  const warn = inputs.warn ?? ((msg) => console.warn(`warning: ${msg}`));
  if (inputs.traces.length === 0) {
    throw new FigureError("no input traces");
  }
  const series: Series[] = [];

  switch (inputs.kind) {
    case "value_vs_iters":
    case "value_vs_time": {
      const ref = inputs.reference;
      if (ref === undefined) {
        throw new FigureError(
          `figure kind ${inputs.kind} needs a reference value (pass --ref); ` +
            "refusing to substitute the trace minimum",
        );
      }
      const byTime = inputs.kind === "value_vs_time";
      for (const t of inputs.traces) {
        const label = seriesLabel(t.rows, t.source);
        series.push({
          label,
          x: t.rows.map((r) => (byTime ? r.timeS : r.globalIter)),
          y: gapSeries(t.rows, ref.fHat, label, warn),
        });
      }
      if (!byTime && ref.lHat !== undefined && ref.dist0 !== undefined) {
        const maxIter = Math.max(...inputs.traces.map((t) => t.rows.at(-1)!.globalIter));
        const x: number[] = [];
        const y: number[] = [];
        for (let k = 1; k <= maxIter; k++) {
          x.push(k);
          y.push((2 * ref.lHat * ref.dist0 * ref.dist0) / ((k + 1) * (k + 1)));
        }
        series.push({ label: "2 L d0^2/(k+1)^2", x, y, color: "#666", dash: "6 4" });
      }
      return {
        title: byTime ? "value gap vs wall time" : "value gap vs accepted iterations",
        xLabel: byTime ? "time [s]" : "accepted iterations",
        yLabel: "F - F_hat",
        logY: true,
        series,
      };
    }
    case "L_vs_iters": {
      for (const t of inputs.traces) {
        series.push({
          label: seriesLabel(t.rows, t.source),
          x: t.rows.map((r) => r.globalIter),
          y: t.rows.map((r) => r.lEst),
        });
      }
      return {
        title: "step Lipschitz estimates",
        xLabel: "accepted iterations",
        yLabel: "L estimate",
        logY: true,
        series,
      };
    }
    case "backtracks_vs_iters": {
      for (const t of inputs.traces) {
        series.push({
          label: seriesLabel(t.rows, t.source),
          x: t.rows.map((r) => r.globalIter),
          y: t.rows.map((r) => r.backtracks),
        });
      }
      return {
        title: "rejected passes per accepted iteration",
        xLabel: "accepted iterations",
        yLabel: "backtracking passes",
        logY: false,
        series,
      };
    }
    default: {
      const kind: never = inputs.kind;
      throw new FigureError(`unknown figure kind ${JSON.stringify(kind)}`);
    }
  }
}
