// The extraction protocol: run the encoder over every train sentence, pool
// each word occurrence from its subword states, average occurrences into one
// static vector per vocabulary type, and emit the result in word2vec text
// format with a JSON sidecar.

import { renameSync, writeFileSync } from "node:fs";

// output appears atomically: write to a temp name, then rename into place
function writeAtomic(path: string, content: string): void {
  const temp = `${path}.tmp`;
  writeFileSync(temp, content, "utf-8");
  renameSync(temp, path);
}

import { Encoder, EncoderConfig, parseModelName } from "./encoder.js";
import type { CorpusDocument } from "./preprocess.js";
import { SubwordTokenizer, tokenizeWord, trainTokenizer } from "./tokenizer.js";

export type Strategy = "average_subwords" | "first_subword" | "skip_subword_types";

export const STRATEGIES: Strategy[] = [
  "average_subwords",
  "first_subword",
  "skip_subword_types",
];

export interface ExtractionResult {
  model: string;
  layer: number;
  strategy: Strategy;
  dim: number;
  types: string[]; // covered vocabulary types, lexicographic
  vectors: Float64Array[]; // aligned with types
  coverage: number; // covered / vocabulary size
  vocabularySize: number;
}

export interface ExtractOptions {
  strategy?: Strategy;
  model?: string;
  /** encoder layer to read; -1 (default) is the final layer */
  layer?: number;
  wholeWordVocabSize?: number;
}

export function extract(
  docs: CorpusDocument[],
  vocabulary: string[],
  options: ExtractOptions = {},
): ExtractionResult {
  const strategy = options.strategy ?? "average_subwords";
  const config: EncoderConfig = parseModelName(options.model ?? "hashctx-64x2");
  const layer =
    options.layer === undefined || options.layer < 0 ? config.layers : options.layer;
  if (layer > config.layers) {
    throw new Error(`layer ${layer} out of range; model has ${config.layers}`);
  }
  const tokenizer: SubwordTokenizer = trainTokenizer(
    docs,
    options.wholeWordVocabSize ?? 1500,
  );
  const encoder = new Encoder(config);
  const wanted = new Set(vocabulary);

  const sums = new Map<string, Float64Array>();
  const counts = new Map<string, number>();
  for (const doc of docs) {
    if (doc.split !== "train") continue;
    for (const sentence of doc.sentences) {
      // flatten the sentence into subword units, remembering word spans
      const pieces = sentence.map((word) => tokenizeWord(word, tokenizer));
      const flat: string[] = [];
      const spans: Array<[number, number]> = [];
      for (const wordPieces of pieces) {
        spans.push([flat.length, flat.length + wordPieces.length]);
        flat.push(...wordPieces);
      }
      const states = encoder.encodeSentence(flat)[layer];
      sentence.forEach((word, i) => {
        if (!wanted.has(word)) return;
        const [start, end] = spans[i];
        if (strategy === "skip_subword_types" && end - start > 1) return;
        let sum = sums.get(word);
        if (!sum) {
          sum = new Float64Array(config.dim);
          sums.set(word, sum);
        }
        if (strategy === "first_subword") {
          const h = states[start];
          for (let d = 0; d < config.dim; d++) sum[d] += h[d];
        } else {
          for (let d = 0; d < config.dim; d++) {
            let pooled = 0;
            for (let p = start; p < end; p++) pooled += states[p][d];
            sum[d] += pooled / (end - start);
          }
        }
        counts.set(word, (counts.get(word) ?? 0) + 1);
      });
    }
  }

  const types = [...sums.keys()].sort();
  const vectors = types.map((t) => {
    const sum = sums.get(t)!;
    const n = counts.get(t)!;
    const vec = new Float64Array(config.dim);
    for (let d = 0; d < config.dim; d++) vec[d] = sum[d] / n;
    return vec;
  });
  return {
    model: config.name,
    layer,
    strategy,
    dim: config.dim,
    types,
    vectors,
    coverage: types.length / vocabulary.length,
    vocabularySize: vocabulary.length,
  };
}

/** word2vec text format: "<count> <dim>" header, then "<word> <f1> ... <fm>". */
export function writeWord2vecText(result: ExtractionResult, path: string): void {
  const lines = [`${result.types.length} ${result.dim}`];
  result.types.forEach((word, i) => {
    const values = Array.from(result.vectors[i], (v) => v.toFixed(6));
    lines.push(`${word} ${values.join(" ")}`);
  });
  writeAtomic(path, lines.join("\n") + "\n");
}

export function writeSidecar(result: ExtractionResult, path: string): void {
  const sidecar = {
    model: result.model,
    layer: result.layer,
    strategy: result.strategy,
    dim: result.dim,
    coverage: result.coverage,
    types_covered: result.types.length,
    vocabulary_size: result.vocabularySize,
  };
  writeAtomic(path, JSON.stringify(sidecar, null, 1) + "\n");
}
