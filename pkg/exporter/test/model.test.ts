import { describe, expect, it } from "vitest";

import { LABELS, TinyClassifier } from "../src/model.js";
import { tokenize } from "../src/tokenizer.js";

const WORDS = ["the", "acting", "was", "superb", "."];

function setup(modelId = "tiny-review-v1") {
  const model = new TinyClassifier(modelId);
  const pieces = tokenize(WORDS);
  const embeddings = model.embed(pieces).map((e) => [...e]);
  return { model, pieces, embeddings };
}

describe("TinyClassifier", () => {
  it("is a pure function of the model id", () => {
    const a = setup();
    const b = setup();
    expect(a.model.forward(a.embeddings).logits).toEqual(b.model.forward(b.embeddings).logits);
  });

  it("different ids name different functions", () => {
    const a = setup("tiny-review-v1");
    const b = setup("tiny-review-v2");
    expect(a.model.forward(a.embeddings).logits).not.toEqual(b.model.forward(b.embeddings).logits);
  });

  it("produces finite logits, one per label", () => {
    const { model, embeddings } = setup();
    const { logits, predicted } = model.forward(embeddings);
    expect(logits).toHaveLength(LABELS.length);
    for (const z of logits) expect(Number.isFinite(z)).toBe(true);
    expect(predicted).toBeGreaterThanOrEqual(0);
    expect(predicted).toBeLessThan(LABELS.length);
  });

  it("rejects an empty sequence", () => {
    const { model } = setup();
    expect(() => model.forward([])).toThrow(/empty/);
  });
});

describe("gradients", () => {
  it("matches central finite differences", () => {
    const { model, embeddings } = setup();
    const cls = model.forward(embeddings).predicted;
    const grads = model.gradients(embeddings, cls);
    const h = 1e-5;
    for (let i = 0; i < embeddings.length; i++) {
      for (let k = 0; k < model.dim; k++) {
        const orig = embeddings[i][k];
        embeddings[i][k] = orig + h;
        const up = model.forward(embeddings).logits[cls];
        embeddings[i][k] = orig - h;
        const down = model.forward(embeddings).logits[cls];
        embeddings[i][k] = orig;
        expect(Math.abs((up - down) / (2 * h) - grads[i][k])).toBeLessThan(1e-9);
      }
    }
  });

  it("gives different positions different gradients", () => {
    const { model, embeddings } = setup();
    const grads = model.gradients(embeddings, 0);
    const norms = grads.map((g) => Math.hypot(...g));
    expect(new Set(norms.map((x) => x.toFixed(12))).size).toBeGreaterThan(1);
  });
});

describe("maskedLogit", () => {
  it("equals the forward logit under the full mask", () => {
    const { model, embeddings } = setup();
    const full = embeddings.map(() => true);
    const logits = model.forward(embeddings).logits;
    for (let cls = 0; cls < LABELS.length; cls++) {
      expect(model.maskedLogit(embeddings, full, cls)).toBeCloseTo(logits[cls], 12);
    }
  });

  it("is finite for the empty coalition", () => {
    const { model, embeddings } = setup();
    const none = embeddings.map(() => false);
    expect(Number.isFinite(model.maskedLogit(embeddings, none, 0))).toBe(true);
  });

  it("checks the mask length", () => {
    const { model, embeddings } = setup();
    expect(() => model.maskedLogit(embeddings, [true], 0)).toThrow(/mask length/);
  });
});
