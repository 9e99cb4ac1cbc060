// Greedy longest-match subword tokenizer. The unit inventory holds the most
// frequent corpus word forms as whole-word units plus short fallback pieces,
// so frequent words stay intact while rare words split into several units —
// the behavior the subword-pooling strategies are defined against.

import type { CorpusDocument } from "./preprocess.js";

export interface SubwordTokenizer {
  wholeWords: Set<string>;
  units: Set<string>;
  maxUnitLength: number;
}

export function trainTokenizer(
  docs: CorpusDocument[],
  wholeWordVocabSize = 1500,
): SubwordTokenizer {
  const freq = new Map<string, number>();
  const chars = new Set<string>();
  for (const doc of docs) {
    if (doc.split !== "train") continue;
    for (const sentence of doc.sentences) {
      for (const token of sentence) {
        freq.set(token, (freq.get(token) ?? 0) + 1);
        for (const ch of token) chars.add(ch);
      }
    }
  }
  const wholeWords = new Set(
    [...freq.entries()]
      .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
      .slice(0, wholeWordVocabSize)
      .map(([t]) => t),
  );
  // fallback pieces: every bigram seen in the corpus, plus single characters
  const units = new Set<string>(chars);
  for (const word of freq.keys()) {
    for (let i = 0; i + 2 <= word.length; i++) units.add(word.slice(i, i + 2));
  }
  for (const w of wholeWords) units.add(w);
  const maxUnitLength = Math.max(...[...units].map((u) => u.length));
  return { wholeWords, units, maxUnitLength };
}

/** Longest-match-first segmentation; every character is a unit of last resort. */
export function tokenizeWord(word: string, tok: SubwordTokenizer): string[] {
  if (tok.wholeWords.has(word)) return [word];
  const pieces: string[] = [];
  let i = 0;
  while (i < word.length) {
    let end = Math.min(word.length, i + tok.maxUnitLength);
    while (end > i + 1 && !tok.units.has(word.slice(i, end))) end--;
    pieces.push(word.slice(i, end));
    i = end;
  }
  return pieces;
}

export function splitsIntoSubwords(word: string, tok: SubwordTokenizer): boolean {
  return tokenizeWord(word, tok).length > 1;
}
