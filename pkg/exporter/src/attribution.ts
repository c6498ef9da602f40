/** Six token-attribution methods over the tiny classifier.
 *
 * Two plain gradient readings, two integrated (path) variants, an
 * Owen-value partition method over a binary token-range tree, and a
 * ridge-regression surrogate fitted to seeded random keep-masks. All
 * of them explain the logit of the predicted class. Scores are
 * computed per word piece, summed to word level, and punctuation words
 * are zeroed afterwards.
 */

import { TinyClassifier } from "./model.js";
import { keyedRng, type Rng } from "./rng.js";
import { isPunctuationWord, sumByWord, tokenize, type Piece } from "./tokenizer.js";

export const METHOD_NAMES = [
  "gradient",
  "gradient_x_input",
  "integrated_gradient",
  "integrated_gradient_x_input",
  "partition_shap",
  "lime",
] as const;

export type MethodName = (typeof METHOD_NAMES)[number];

export function isMethodName(name: string): name is MethodName {
  return (METHOD_NAMES as readonly string[]).includes(name);
}

const IG_STEPS = 50;
const LIME_SAMPLES = 200;
const LIME_RIDGE = 0.01;
// wide enough that single-drop masks keep real weight on short inputs
const LIME_KERNEL_WIDTH = 0.75;

function l2(v: number[]): number {
  return Math.sqrt(v.reduce((s, x) => s + x * x, 0));
}

function dot(a: number[], b: number[]): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += a[i] * b[i];
  return s;
}

/** Path-averaged gradients from the zero baseline (midpoint rule). */
function integratedGradients(model: TinyClassifier, embeddings: number[][], cls: number): number[][] {
  const n = embeddings.length;
  const avg: number[][] = embeddings.map(() => new Array<number>(model.dim).fill(0));
  for (let step = 0; step < IG_STEPS; step++) {
    const alpha = (step + 0.5) / IG_STEPS;
    const scaled = embeddings.map((e) => e.map((x) => x * alpha));
    const grads = model.gradients(scaled, cls);
    for (let i = 0; i < n; i++) {
      for (let k = 0; k < model.dim; k++) avg[i][k] += grads[i][k] / IG_STEPS;
    }
  }
  return avg;
}

/**
 * Owen values on a binary halving tree over piece positions. At every
 * split each child is scored with the sibling both absent and present
 * (half weight each), which keeps the attribution exact: the values
 * sum to v(all pieces) - v(empty).
 */
function partitionValues(model: TinyClassifier, embeddings: number[][], cls: number): number[] {
  const n = embeddings.length;
  const cache = new Map<string, number>();
  const value = (mask: boolean[]): number => {
    const key = mask.map((b) => (b ? "1" : "0")).join("");
    let v = cache.get(key);
    if (v === undefined) {
      v = model.maskedLogit(embeddings, mask, cls);
      cache.set(key, v);
    }
    return v;
  };
  const withRange = (mask: boolean[], lo: number, hi: number): boolean[] => {
    const next = [...mask];
    for (let i = lo; i < hi; i++) next[i] = true;
    return next;
  };

  const out = new Array<number>(n).fill(0);
  interface Ctx {
    mask: boolean[];
    weight: number;
  }
  const recurse = (lo: number, hi: number, contexts: Ctx[]): void => {
    if (hi - lo === 1) {
      let phi = 0;
      for (const { mask, weight } of contexts) {
        phi += weight * (value(withRange(mask, lo, hi)) - value(mask));
      }
      out[lo] = phi;
      return;
    }
    const mid = (lo + hi) >> 1;
    const left: Ctx[] = [];
    const right: Ctx[] = [];
    for (const { mask, weight } of contexts) {
      left.push({ mask, weight: weight / 2 });
      left.push({ mask: withRange(mask, mid, hi), weight: weight / 2 });
      right.push({ mask, weight: weight / 2 });
      right.push({ mask: withRange(mask, lo, mid), weight: weight / 2 });
    }
    recurse(lo, mid, left);
    recurse(mid, hi, right);
  };
  recurse(0, n, [{ mask: new Array<boolean>(n).fill(false), weight: 1 }]);
  return out;
}

/** Gaussian elimination with partial pivoting; a is modified. */
function solve(a: number[][], b: number[]): number[] {
  const n = b.length;
  const x = [...b];
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(a[r][col]) > Math.abs(a[pivot][col])) pivot = r;
    }
    [a[col], a[pivot]] = [a[pivot], a[col]];
    [x[col], x[pivot]] = [x[pivot], x[col]];
    const diag = a[col][col];
    if (Math.abs(diag) < 1e-12) throw new Error("singular system in surrogate fit");
    for (let r = col + 1; r < n; r++) {
      const f = a[r][col] / diag;
      if (f === 0) continue;
      for (let c = col; c < n; c++) a[r][c] -= f * a[col][c];
      x[r] -= f * x[col];
    }
  }
  for (let r = n - 1; r >= 0; r--) {
    for (let c = r + 1; c < n; c++) x[r] -= a[r][c] * x[c];
    x[r] /= a[r][r];
  }
  return x;
}

/**
 * Weighted ridge surrogate over random keep-masks. The first sample is
 * always the full mask; weights fall off with the fraction of pieces
 * dropped. Coefficients (not the intercept) are the scores.
 */
function limeValues(model: TinyClassifier, embeddings: number[][], cls: number, rng: Rng): number[] {
  const n = embeddings.length;
  const masks: boolean[][] = [new Array<boolean>(n).fill(true)];
  for (let s = 1; s < LIME_SAMPLES; s++) {
    masks.push(Array.from({ length: n }, () => rng() < 0.5));
  }
  const cols = n + 1; // intercept first
  const ata = Array.from({ length: cols }, () => new Array<number>(cols).fill(0));
  const atb = new Array<number>(cols).fill(0);
  for (const mask of masks) {
    const kept = mask.reduce((acc, b) => acc + (b ? 1 : 0), 0);
    const distance = 1 - kept / n;
    const weight = Math.exp(-(distance * distance) / (LIME_KERNEL_WIDTH * LIME_KERNEL_WIDTH));
    const y = model.maskedLogit(embeddings, mask, cls);
    const row = [1, ...mask.map((b) => (b ? 1 : 0))];
    for (let i = 0; i < cols; i++) {
      if (row[i] === 0) continue;
      atb[i] += weight * row[i] * y;
      for (let j = 0; j < cols; j++) {
        if (row[j] !== 0) ata[i][j] += weight * row[i] * row[j];
      }
    }
  }
  for (let i = 1; i < cols; i++) ata[i][i] += LIME_RIDGE; // intercept unpenalized
  return solve(ata, atb).slice(1);
}

/** Per-piece scores for one method. `limeKey` seeds the mask stream. */
export function attributePieces(
  model: TinyClassifier,
  embeddings: number[][],
  cls: number,
  method: MethodName,
  limeKey: string,
): number[] {
  switch (method) {
    case "gradient":
      return model.gradients(embeddings, cls).map(l2);
    case "gradient_x_input":
      return model.gradients(embeddings, cls).map((g, i) => dot(g, embeddings[i]));
    case "integrated_gradient":
      return integratedGradients(model, embeddings, cls).map(l2);
    case "integrated_gradient_x_input":
      return integratedGradients(model, embeddings, cls).map((g, i) => dot(g, embeddings[i]));
    case "partition_shap":
      return partitionValues(model, embeddings, cls);
    case "lime":
      return limeValues(model, embeddings, cls, keyedRng(limeKey));
  }
}

export interface Explanation {
  predicted: number;
  /** word-level scores per method, punctuation already zeroed */
  scores: Record<string, number[]>;
}

/**
 * Runs the configured methods on one pre-split sentence. Piece scores
 * are summed per word; words made only of punctuation are zeroed.
 * @throws AlignmentError when a word cannot be encoded.
 */
export function explainWords(
  model: TinyClassifier,
  words: string[],
  methods: readonly MethodName[],
  limeKey: string,
): Explanation {
  const pieces: Piece[] = tokenize(words);
  const embeddings = model.embed(pieces);
  const { predicted } = model.forward(embeddings);
  const scores: Record<string, number[]> = {};
  for (const method of methods) {
    const perPiece = attributePieces(model, embeddings, predicted, method, limeKey);
    const perWord = sumByWord(pieces, perPiece, words.length);
    scores[method] = perWord.map((s, w) => (isPunctuationWord(words[w]) ? 0 : s));
  }
  return { predicted, scores };
}
