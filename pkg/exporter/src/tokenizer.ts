/** Word-piece tokenization with word alignment.
 *
 * The classifier scores sub-word pieces; human annotations are word
 * level. Every piece therefore carries the index of the word it came
 * from, and piece scores are later summed per word. A word the
 * tokenizer cannot encode at all breaks that alignment, which callers
 * surface by skipping the instance.
 */

// same set the downstream corpus tools use for punctuation zeroing
export const PUNCTUATION = new Set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~".split(""));

const PIECE_LEN = 4;

export class AlignmentError extends Error {}

export interface Piece {
  text: string;
  wordIndex: number;
}

export function isPunctuationWord(word: string): boolean {
  if (word.length === 0) return false;
  for (const ch of word) {
    if (!PUNCTUATION.has(ch)) return false;
  }
  return true;
}

/** Lowercase and drop characters outside the piece alphabet. */
function normalize(word: string): string {
  return word.toLowerCase().replace(/[^a-z0-9']/g, "");
}

/**
 * Splits one word into greedy fixed-width pieces ("birds" -> "bird",
 * "##s"). Punctuation-only words map to themselves so the word count
 * is preserved. Returns [] when the word cannot be encoded.
 */
export function wordPieces(word: string): string[] {
  if (isPunctuationWord(word)) return [word];
  const norm = normalize(word);
  if (norm.length === 0) return [];
  const pieces: string[] = [];
  for (let i = 0; i < norm.length; i += PIECE_LEN) {
    const chunk = norm.slice(i, i + PIECE_LEN);
    pieces.push(i === 0 ? chunk : `##${chunk}`);
  }
  return pieces;
}

/**
 * Tokenizes a pre-split sentence into aligned pieces.
 * @throws AlignmentError when some word yields no pieces.
 */
export function tokenize(words: string[]): Piece[] {
  const pieces: Piece[] = [];
  words.forEach((word, wordIndex) => {
    const split = wordPieces(word);
    if (split.length === 0) {
      throw new AlignmentError(`word ${wordIndex} (${JSON.stringify(word)}) cannot be encoded`);
    }
    for (const text of split) {
      pieces.push({ text, wordIndex });
    }
  });
  return pieces;
}

/** Sums a per-piece score vector down to one score per word. */
export function sumByWord(pieces: Piece[], scores: number[], wordCount: number): number[] {
  if (scores.length !== pieces.length) {
    throw new Error(`got ${scores.length} scores for ${pieces.length} pieces`);
  }
  const out = new Array<number>(wordCount).fill(0);
  pieces.forEach((piece, i) => {
    out[piece.wordIndex] += scores[i];
  });
  return out;
}
