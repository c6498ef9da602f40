/** Bundled review-sentiment mini corpus.
 *
 * Sentences are pre-split into words; most carry binary rationale
 * marks from three annotators (which words support the label). One
 * test instance has no rationales and one contains a word the
 * tokenizer cannot encode, so the exporter's skip and omit paths stay
 * exercised.
 */

export const SPLITS = ["train", "validation", "test"] as const;
export type SplitName = (typeof SPLITS)[number];

export type Label = "negative" | "neutral" | "positive";

export interface DatasetInstance {
  id: string;
  words: string[];
  label: Label;
  /** one binary vector per annotator, aligned to words */
  rationales?: number[][];
}

/** Builds annotator vectors of length n from marked word indices. */
function marks(n: number, ...annotators: number[][]): number[][] {
  return annotators.map((indices) => {
    const vec = new Array<number>(n).fill(0);
    for (const i of indices) {
      if (i < 0 || i >= n) throw new Error(`rationale index ${i} out of range for ${n} words`);
      vec[i] = 1;
    }
    return vec;
  });
}

const TRAIN: DatasetInstance[] = [
  {
    id: "tr01",
    words: ["an", "instant", "classic", "."],
    label: "positive",
    rationales: marks(4, [1, 2], [2], [1, 2]),
  },
  {
    id: "tr02",
    words: ["two", "hours", "i", "will", "never", "get", "back"],
    label: "negative",
    rationales: marks(7, [4, 5, 6], [4], [3, 4, 5, 6]),
  },
  {
    id: "tr03",
    words: ["competent", "but", "entirely", "unremarkable"],
    label: "neutral",
    rationales: marks(4, [3], [2, 3], [3]),
  },
  {
    id: "tr04",
    words: ["the", "cinematography", "is", "breathtaking", "."],
    label: "positive",
    rationales: marks(5, [3], [1, 3], [3]),
  },
  {
    id: "tr05",
    words: ["a", "sequel", "nobody", "asked", "for"],
    label: "negative",
    rationales: marks(5, [2, 3], [2], [2, 3, 4]),
  },
  {
    id: "tr06",
    words: ["watchable", ",", "if", "you", "are", "patient"],
    label: "neutral",
  },
];

const VALIDATION: DatasetInstance[] = [
  {
    id: "v01",
    words: ["a", "triumph", "of", "practical", "effects"],
    label: "positive",
    rationales: marks(5, [1], [1, 3, 4], [1]),
  },
  {
    id: "v02",
    words: ["it", "exists", ",", "and", "that", "is", "all"],
    label: "neutral",
    rationales: marks(7, [6], [1, 6], [6]),
  },
  {
    id: "v03",
    words: ["the", "humor", "lands", "every", "time"],
    label: "positive",
    rationales: marks(5, [1, 2], [2], [1, 2, 3]),
  },
  {
    id: "v04",
    words: ["tedious", "from", "the", "first", "frame"],
    label: "negative",
    rationales: marks(5, [0], [0, 3], [0]),
  },
];

const TEST: DatasetInstance[] = [
  {
    id: "t01",
    words: ["the", "acting", "was", "superb", "."],
    label: "positive",
    rationales: marks(5, [3], [3], [1, 3]),
  },
  {
    id: "t02",
    words: ["a", "dull", ",", "lifeless", "script", "."],
    label: "negative",
    rationales: marks(6, [1, 3], [3], [1, 3, 4]),
  },
  {
    id: "t03",
    words: ["the", "plot", "twists", "kept", "me", "guessing"],
    label: "positive",
    rationales: marks(6, [2], [2, 5], [1, 2]),
  },
  {
    id: "t04",
    words: ["i", "walked", "out", "halfway", "through"],
    label: "negative",
    rationales: marks(5, [1, 2], [3], [1, 2, 3]),
  },
  {
    id: "t05",
    words: ["a", "warm", ",", "funny", ",", "generous", "film", "."],
    label: "positive",
    rationales: marks(8, [1, 3, 5], [3], [1, 3]),
  },
  {
    id: "t06",
    words: ["the", "pacing", "drags", "in", "the", "middle"],
    label: "negative",
    rationales: marks(6, [2], [1, 2], [2, 5]),
  },
  {
    id: "t07",
    words: ["every", "scene", "feels", "honest", "and", "earned"],
    label: "positive",
    rationales: marks(6, [3, 5], [3], [0, 3, 5]),
  },
  {
    id: "t08",
    words: ["the", "dialogue", "is", "painfully", "wooden"],
    label: "negative",
    rationales: marks(5, [3, 4], [4], [3, 4]),
  },
  {
    id: "t09",
    words: ["a", "masterclass", "in", "quiet", "tension"],
    label: "positive",
    rationales: marks(5, [1], [1, 4], [1, 3, 4]),
  },
  {
    id: "t10",
    words: ["forgettable", "characters", "and", "a", "tired", "premise"],
    label: "negative",
    rationales: marks(6, [0], [0, 4], [0, 4, 5]),
  },
  {
    id: "t11",
    words: ["the", "soundtrack", "alone", "is", "worth", "it"],
    label: "positive",
    rationales: marks(6, [1], [1, 2], [1, 4]),
  },
  {
    id: "t12",
    words: ["clumsy", "editing", "undercuts", "a", "strong", "cast"],
    label: "negative",
    rationales: marks(6, [0, 1], [0], [0, 1, 4]),
  },
  {
    // no rationales: exported without a human field
    id: "t13",
    words: ["somehow", "both", "boring", "and", "exhausting"],
    label: "negative",
  },
  {
    // "→" cannot be encoded: exporter skips this instance and logs it
    id: "t14",
    words: ["the", "ending", "→", "pure", "chaos"],
    label: "negative",
    rationales: marks(5, [3, 4], [4], [3, 4]),
  },
];

const BY_SPLIT: Record<SplitName, DatasetInstance[]> = {
  train: TRAIN,
  validation: VALIDATION,
  test: TEST,
};

export function loadSplit(split: SplitName): DatasetInstance[] {
  return BY_SPLIT[split];
}

export function isSplitName(name: string): name is SplitName {
  return (SPLITS as readonly string[]).includes(name);
}
