import { describe, expect, it } from "vitest";

import { fnv1a, gaussian, keyedRng, mulberry32 } from "../src/rng.js";

describe("fnv1a", () => {
  it("matches the published 32-bit test vectors", () => {
    // offset basis and the canonical single-byte vector
    expect(fnv1a("")).toBe(0x811c9dc5);
    expect(fnv1a("a")).toBe(0xe40c292c);
    expect(fnv1a("foobar")).toBe(0xbf9cf968);
  });

  it("separates nearby keys", () => {
    expect(fnv1a("7:t01:lime")).not.toBe(fnv1a("7:t02:lime"));
    expect(fnv1a("7:t01:lime")).not.toBe(fnv1a("8:t01:lime"));
  });
});

describe("mulberry32", () => {
  it("is deterministic per seed", () => {
    const a = mulberry32(123);
    const b = mulberry32(123);
    const seqA = Array.from({ length: 10 }, a);
    const seqB = Array.from({ length: 10 }, b);
    expect(seqA).toEqual(seqB);
  });

  it("stays in [0, 1)", () => {
    const rng = mulberry32(42);
    for (let i = 0; i < 5000; i++) {
      const x = rng();
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThan(1);
    }
  });

  it("differs across seeds", () => {
    expect(mulberry32(1)()).not.toBe(mulberry32(2)());
  });
});

describe("gaussian", () => {
  it("has roughly standard moments", () => {
    const rng = keyedRng("moment-check");
    const n = 4000;
    let sum = 0;
    let sumSq = 0;
    for (let i = 0; i < n; i++) {
      const x = gaussian(rng);
      sum += x;
      sumSq += x * x;
    }
    const mean = sum / n;
    const sd = Math.sqrt(sumSq / n - mean * mean);
    expect(Math.abs(mean)).toBeLessThan(0.1);
    expect(sd).toBeGreaterThan(0.9);
    expect(sd).toBeLessThan(1.1);
  });
});
