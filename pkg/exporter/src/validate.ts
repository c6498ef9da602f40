/** Strict structural checks for emitted corpus records.
 *
 * Mirrors the rules the downstream corpus reader enforces (unknown
 * fields, ragged vectors, non-finite scores, non-binary annotations)
 * so a bad record fails here, before it reaches disk.
 */

export interface CorpusRecord {
  id: string;
  tokens: string[];
  attributions: Record<string, number[]>;
  human?: number[][];
  gold_label?: string;
  predicted_label?: string;
}

const KNOWN_FIELDS = new Set(["id", "tokens", "attributions", "human", "gold_label", "predicted_label"]);

function fail(id: string, message: string): never {
  throw new Error(`record '${id}': ${message}`);
}

export function validateRecord(rec: CorpusRecord): void {
  const id = rec.id;
  if (typeof id !== "string" || id.length === 0) {
    throw new Error("record has a missing or empty id");
  }
  for (const field of Object.keys(rec)) {
    if (!KNOWN_FIELDS.has(field)) fail(id, `unknown field '${field}'`);
  }
  if (!Array.isArray(rec.tokens) || rec.tokens.length === 0) {
    fail(id, "tokens must be a non-empty array");
  }
  if (rec.tokens.some((t) => typeof t !== "string")) fail(id, "tokens must all be strings");
  const n = rec.tokens.length;

  const methods = Object.keys(rec.attributions ?? {});
  if (methods.length === 0) fail(id, "attributions must have at least one method");
  for (const method of methods) {
    const vec = rec.attributions[method];
    if (!Array.isArray(vec) || vec.length !== n) {
      fail(id, `attributions['${method}'] has length ${Array.isArray(vec) ? vec.length : "?"}, expected ${n}`);
    }
    for (const x of vec) {
      if (typeof x !== "number" || !Number.isFinite(x)) {
        fail(id, `attributions['${method}'] contains a non-finite or non-numeric score`);
      }
    }
  }

  if (rec.human !== undefined) {
    if (!Array.isArray(rec.human) || rec.human.length === 0) {
      fail(id, "human must be a non-empty array of annotator vectors");
    }
    rec.human.forEach((vec, a) => {
      if (!Array.isArray(vec) || vec.length !== n) {
        fail(id, `human[${a}] has length ${Array.isArray(vec) ? vec.length : "?"}, expected ${n}`);
      }
      for (const x of vec) {
        if (x !== 0 && x !== 1) fail(id, `human[${a}] must be binary (0/1)`);
      }
    });
  }

  for (const field of ["gold_label", "predicted_label"] as const) {
    const value = rec[field];
    if (value !== undefined && (typeof value !== "string" || value.length === 0)) {
      fail(id, `${field} must be a non-empty string when present`);
    }
  }
}
