import { describe, expect, it } from "vitest";

import { AlignmentError, isPunctuationWord, sumByWord, tokenize, wordPieces } from "../src/tokenizer.js";

describe("wordPieces", () => {
  it("splits long words into fixed-width pieces", () => {
    expect(wordPieces("birds")).toEqual(["bird", "##s"]);
    expect(wordPieces("forgettable")).toEqual(["forg", "##etta", "##ble"]);
  });

  it("keeps short words whole", () => {
    expect(wordPieces("sat")).toEqual(["sat"]);
    expect(wordPieces("dull")).toEqual(["dull"]);
  });

  it("lowercases and strips odd characters", () => {
    expect(wordPieces("Birds")).toEqual(["bird", "##s"]);
    expect(wordPieces("don't")).toEqual(["don'", "##t"]);
    expect(wordPieces("café")).toEqual(["caf"]);
  });

  it("maps punctuation words to themselves", () => {
    expect(wordPieces(".")).toEqual(["."]);
    expect(wordPieces("!?")).toEqual(["!?"]);
  });

  it("returns nothing for unencodable words", () => {
    expect(wordPieces("→")).toEqual([]);
    expect(wordPieces("")).toEqual([]);
  });
});

describe("isPunctuationWord", () => {
  it("accepts pure ASCII punctuation", () => {
    expect(isPunctuationWord(".")).toBe(true);
    expect(isPunctuationWord(",")).toBe(true);
    expect(isPunctuationWord("...")).toBe(true);
  });

  it("rejects everything else", () => {
    expect(isPunctuationWord("a.")).toBe(false);
    expect(isPunctuationWord("")).toBe(false);
    expect(isPunctuationWord("→")).toBe(false); // not ASCII punctuation
  });
});

describe("tokenize", () => {
  it("tags every piece with its word index", () => {
    const pieces = tokenize(["the", "acting", "was", "superb", "."]);
    expect(pieces.map((p) => p.text)).toEqual(["the", "acti", "##ng", "was", "supe", "##rb", "."]);
    expect(pieces.map((p) => p.wordIndex)).toEqual([0, 1, 1, 2, 3, 3, 4]);
  });

  it("raises a descriptive alignment error", () => {
    expect(() => tokenize(["the", "ending", "→", "pure", "chaos"])).toThrow(AlignmentError);
    expect(() => tokenize(["the", "ending", "→", "pure", "chaos"])).toThrow(/word 2/);
  });
});

describe("sumByWord", () => {
  it("sums piece scores into word slots", () => {
    const pieces = tokenize(["the", "acting", "was"]);
    // pieces: the | acti ##ng | was
    expect(sumByWord(pieces, [0.5, 0.25, 0.25, 1.0], 3)).toEqual([0.5, 0.5, 1.0]);
  });

  it("rejects a score vector of the wrong length", () => {
    const pieces = tokenize(["the"]);
    expect(() => sumByWord(pieces, [1, 2], 1)).toThrow(/2 scores for 1 pieces/);
  });
});
