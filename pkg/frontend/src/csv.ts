/**
 * Parsing for the solver trace CSV written by the benchmark harness.
 *
 * The schema is fixed: eleven columns, exact header match, NaN spelled
 * "nan".  Anything else is a hard error so figures never render from a
 * half-understood file.
 */

export const TRACE_HEADER =
  "algo,restart,global_iter,backtracks,tau,L_est,kappa_est,n_j,F_value,g_norm,time_s";

export interface TraceRow {
  algo: string;
  restart: number;
  globalIter: number;
  backtracks: number;
  tau: number;
  lEst: number;
  kappaEst: number;
  nJ: number;
  fValue: number;
  gNorm: number;
  timeS: number;
}

export class TraceFormatError extends Error {}

function num(field: string, at: string): number {
  if (field === "nan") return NaN;
  const v = Number(field);
  if (field === "" || Number.isNaN(v)) {
    throw new TraceFormatError(`${at}: bad numeric field ${JSON.stringify(field)}`);
  }
  return v;
}

export function parseTrace(text: string, source = "<trace>"): TraceRow[] {
  const lines = text.split(/\r?\n/);
  if (lines.length === 0 || lines[0] !== TRACE_HEADER) {
    throw new TraceFormatError(
      `${source}: unexpected header ${JSON.stringify(lines[0] ?? "")}`,
    );
  }
  const rows: TraceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === undefined || line.trim() === "") continue;
    const parts = line.split(",");
    if (parts.length !== 11) {
      throw new TraceFormatError(`${source}:${i + 1}: expected 11 fields, got ${parts.length}`);
    }
    const at = `${source}:${i + 1}`;
    rows.push({
      algo: parts[0]!,
      restart: num(parts[1]!, at),
      globalIter: num(parts[2]!, at),
      backtracks: num(parts[3]!, at),
      tau: num(parts[4]!, at),
      lEst: num(parts[5]!, at),
      kappaEst: num(parts[6]!, at),
      nJ: num(parts[7]!, at),
      fValue: num(parts[8]!, at),
      gNorm: num(parts[9]!, at),
      timeS: num(parts[10]!, at),
    });
  }
  if (rows.length === 0) {
    throw new TraceFormatError(`${source}: no data rows (header only)`);
  }
  return rows;
}
