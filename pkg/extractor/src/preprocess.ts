// Text preprocessing mirroring the main pipeline exactly: lowercase, split on
// whitespace, strip wrapping punctuation, keep pure-letter tokens that are not
// stopwords. Parity with the pipeline's own output is covered by tests.

import { readFileSync } from "node:fs";

export function loadStopwords(path: string): Set<string> {
  const words = new Set<string>();
  for (const line of readFileSync(path, "utf-8").split("\n")) {
    const word = line.trim();
    if (word && !word.startsWith("#")) words.add(word);
  }
  return words;
}

const isLetter = (ch: string) => /\p{L}/u.test(ch);
const isAlnum = (ch: string) => /[\p{L}\p{N}]/u.test(ch);

function cleanToken(raw: string): string | null {
  let start = 0;
  let end = raw.length;
  while (start < end && !isAlnum(raw[start])) start++;
  while (end > start && !isAlnum(raw[end - 1])) end--;
  const token = raw.slice(start, end);
  if (token.length === 0) return null;
  for (const ch of token) {
    if (!isLetter(ch)) return null;
  }
  return token;
}

export function preprocess(rawText: string, stopwords: Set<string>): string[] {
  const tokens: string[] = [];
  for (const piece of rawText.toLowerCase().split(/\s+/u)) {
    if (!piece) continue;
    const token = cleanToken(piece);
    if (token !== null && !stopwords.has(token)) tokens.push(token);
  }
  return tokens;
}

// Sentences serve as the context window for the encoder. The splitter is a
// simple punctuation rule: a sentence ends at ./!/? followed by whitespace
// (or at the end of the document).
export function splitSentences(rawText: string): string[] {
  return rawText
    .split(/(?<=[.!?])["')\]]*\s+/u)
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
}

export interface CorpusDocument {
  /** token lists per sentence, already preprocessed */
  sentences: string[][];
  split: "train" | "test";
}

export function loadLineCorpus(
  docsPath: string,
  splitPath: string | null,
  stopwords: Set<string>,
): CorpusDocument[] {
  const testLines = new Set<number>();
  if (splitPath) {
    for (const field of readFileSync(splitPath, "utf-8").split(/\s+/)) {
      if (field) testLines.add(Number(field));
    }
  }
  const docs: CorpusDocument[] = [];
  const lines = readFileSync(docsPath, "utf-8").split("\n");
  if (lines.length && lines[lines.length - 1] === "") lines.pop();
  lines.forEach((line, i) => {
    const sentences = splitSentences(line)
      .map((s) => preprocess(s, stopwords))
      .filter((tokens) => tokens.length > 0);
    docs.push({
      sentences,
      split: testLines.has(i + 1) ? "test" : "train",
    });
  });
  return docs;
}

/** Lexicographic vocabulary over the train split with a min-df filter,
 *  mirroring the main pipeline's counting. */
export function buildVocabulary(docs: CorpusDocument[], minDf = 5): string[] {
  const docFreq = new Map<string, number>();
  for (const doc of docs) {
    if (doc.split !== "train") continue;
    const seen = new Set<string>();
    for (const sentence of doc.sentences) {
      for (const token of sentence) seen.add(token);
    }
    for (const token of seen) docFreq.set(token, (docFreq.get(token) ?? 0) + 1);
  }
  return [...docFreq.entries()]
    .filter(([, df]) => df >= minDf)
    .map(([t]) => t)
    .sort();
}
