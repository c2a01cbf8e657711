/** Reference files: key = value lines produced by `freefista reference`. */

export interface ReferenceEntry {
  problemKey?: string;
  fHat: number;
  budget?: number;
  seed?: number;
  lHat?: number;
  dist0?: number;
}

export class ReferenceFormatError extends Error {}

export function parseReference(text: string, source = "<reference>"): ReferenceEntry {
  const raw: Record<string, string> = {};
  text.split(/\r?\n/).forEach((line, i) => {
    const trimmed = line.trim();
    if (trimmed === "" || trimmed.startsWith("#")) return;
    const eq = trimmed.indexOf("=");
    if (eq < 0) {
      throw new ReferenceFormatError(`${source}:${i + 1}: expected 'key = value'`);
    }
    raw[trimmed.slice(0, eq).trim()] = trimmed.slice(eq + 1).trim();
  });
  const fHatText = raw["F_hat"];
  if (fHatText === undefined) {
    throw new ReferenceFormatError(`${source}: missing F_hat`);
  }
  const fHat = Number(fHatText);
  if (Number.isNaN(fHat)) {
    throw new ReferenceFormatError(`${source}: bad F_hat ${JSON.stringify(fHatText)}`);
  }
  const entry: ReferenceEntry = { fHat };
  if (raw["problem_key"] !== undefined) entry.problemKey = raw["problem_key"];
  if (raw["budget"] !== undefined) entry.budget = Number(raw["budget"]);
  if (raw["seed"] !== undefined) entry.seed = Number(raw["seed"]);
  if (raw["L_hat"] !== undefined) entry.lHat = Number(raw["L_hat"]);
  if (raw["dist0"] !== undefined) entry.dist0 = Number(raw["dist0"]);
  return entry;
}
