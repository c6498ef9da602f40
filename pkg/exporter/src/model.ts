/** A tiny deterministic text classifier.
 *
 * Attention-pooled piece embeddings, one tanh layer, linear head. All
 * weights and the (virtual, hash-addressed) embedding table are drawn
 * from RNG streams keyed by the model identifier, so the same id
 * always names the same function. Small enough that the gradients the
 * attribution methods need are written out by hand; the pooling is
 * attention-weighted rather than a plain mean so that different
 * positions actually receive different gradients.
 */

import { gaussian, keyedRng } from "./rng.js";
import type { Piece } from "./tokenizer.js";

export const LABELS = ["negative", "neutral", "positive"] as const;

function randomVector(key: string, n: number, scale: number): number[] {
  const rng = keyedRng(key);
  const out = new Array<number>(n);
  for (let i = 0; i < n; i++) out[i] = gaussian(rng) * scale;
  return out;
}

function randomMatrix(key: string, rows: number, cols: number, scale: number): number[][] {
  const rng = keyedRng(key);
  const out: number[][] = [];
  for (let r = 0; r < rows; r++) {
    const row = new Array<number>(cols);
    for (let c = 0; c < cols; c++) row[c] = gaussian(rng) * scale;
    out.push(row);
  }
  return out;
}

function matVec(m: number[][], v: number[]): number[] {
  return m.map((row) => row.reduce((acc, w, i) => acc + w * v[i], 0));
}

function dot(a: number[], b: number[]): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += a[i] * b[i];
  return s;
}

export interface ModelOutput {
  logits: number[];
  predicted: number;
}

export class TinyClassifier {
  readonly modelId: string;
  readonly dim: number;
  readonly classes: number;
  private readonly query: number[];
  private readonly w1: number[][];
  private readonly b1: number[];
  private readonly w2: number[][];
  private readonly b2: number[];
  private readonly embeddingCache = new Map<string, number[]>();

  constructor(modelId: string, dim = 16, classes = LABELS.length) {
    this.modelId = modelId;
    this.dim = dim;
    this.classes = classes;
    const scale = 1 / Math.sqrt(dim);
    this.query = randomVector(`${modelId}:query`, dim, 1);
    this.w1 = randomMatrix(`${modelId}:w1`, dim, dim, scale);
    this.b1 = randomVector(`${modelId}:b1`, dim, 0.1);
    this.w2 = randomMatrix(`${modelId}:w2`, classes, dim, scale);
    this.b2 = randomVector(`${modelId}:b2`, classes, 0.1);
  }

  /** Embedding for one piece, drawn lazily and cached. */
  embedding(pieceText: string): number[] {
    let vec = this.embeddingCache.get(pieceText);
    if (vec === undefined) {
      vec = randomVector(`${this.modelId}:emb:${pieceText}`, this.dim, 1 / Math.sqrt(this.dim));
      this.embeddingCache.set(pieceText, vec);
    }
    return vec;
  }

  embed(pieces: Piece[]): number[][] {
    return pieces.map((p) => this.embedding(p.text));
  }

  /** Attention weights and pooled vector over the kept positions. */
  private pool(embeddings: number[][], keep?: boolean[]): { attn: number[]; pooled: number[] } {
    const n = embeddings.length;
    const attn = new Array<number>(n).fill(0);
    const pooled = new Array<number>(this.dim).fill(0);
    const scores: number[] = [];
    const kept: number[] = [];
    for (let i = 0; i < n; i++) {
      if (keep === undefined || keep[i]) {
        kept.push(i);
        scores.push(dot(this.query, embeddings[i]) / Math.sqrt(this.dim));
      }
    }
    if (kept.length === 0) return { attn, pooled }; // empty coalition pools to zero
    const top = Math.max(...scores);
    const exps = scores.map((s) => Math.exp(s - top));
    const z = exps.reduce((a, b) => a + b, 0);
    kept.forEach((i, j) => {
      const a = exps[j] / z;
      attn[i] = a;
      for (let k = 0; k < this.dim; k++) pooled[k] += a * embeddings[i][k];
    });
    return { attn, pooled };
  }

  private logitsFromPooled(pooled: number[]): number[] {
    const h = matVec(this.w1, pooled).map((x, j) => Math.tanh(x + this.b1[j]));
    return matVec(this.w2, h).map((x, c) => x + this.b2[c]);
  }

  forward(embeddings: number[][]): ModelOutput {
    if (embeddings.length === 0) throw new Error("cannot score an empty piece sequence");
    const logits = this.logitsFromPooled(this.pool(embeddings).pooled);
    let predicted = 0;
    for (let c = 1; c < logits.length; c++) {
      if (logits[c] > logits[predicted]) predicted = c;
    }
    return { logits, predicted };
  }

  /**
   * Logit of `cls` with only the kept positions attended to. The empty
   * coalition pools to the zero vector, which keeps maskedLogit total
   * (every keep mask has a value).
   */
  maskedLogit(embeddings: number[][], keep: boolean[], cls: number): number {
    if (keep.length !== embeddings.length) {
      throw new Error(`mask length ${keep.length} != ${embeddings.length} pieces`);
    }
    return this.logitsFromPooled(this.pool(embeddings, keep).pooled)[cls];
  }

  /**
   * d logit_cls / d embedding_i for every piece. Two paths per
   * position: through the pooled sum directly (weight a_i) and through
   * its own attention score (softmax Jacobian), which is what makes
   * the per-position gradients distinct.
   */
  gradients(embeddings: number[][], cls: number): number[][] {
    const { attn, pooled } = this.pool(embeddings);
    const pre = matVec(this.w1, pooled).map((x, j) => x + this.b1[j]);
    const h = pre.map(Math.tanh);
    const u = h.map((hj, j) => (1 - hj * hj) * this.w2[cls][j]);
    // g = d logit / d pooled = w1^T u
    const g = new Array<number>(this.dim).fill(0);
    for (let j = 0; j < this.dim; j++) {
      for (let k = 0; k < this.dim; k++) g[k] += this.w1[j][k] * u[j];
    }
    const gPooled = dot(pooled, g);
    const invSqrt = 1 / Math.sqrt(this.dim);
    return embeddings.map((e, i) => {
      const a = attn[i];
      const scoreGrad = a * (dot(e, g) - gPooled) * invSqrt;
      return g.map((gk, k) => a * gk + scoreGrad * this.query[k]);
    });
  }
}
