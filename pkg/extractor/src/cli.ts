#!/usr/bin/env node
// context-extract: static type-level embeddings from a contextual encoder.
//
//   context-extract --corpus docs.txt --split-file test-lines.txt \
//       --stopwords stopwords_en.txt --strategy average_subwords \
//       --model hashctx-64x2 --out vectors.w2v.txt
//
// Writes the embedding file plus "<out>.json" (model, layer, strategy,
// coverage) so downstream loaders can check what they are consuming.

import { parseArgs } from "node:util";

import { extract, STRATEGIES, Strategy, writeSidecar, writeWord2vecText } from "./extract.js";
import { buildVocabulary, loadLineCorpus, loadStopwords } from "./preprocess.js";

export function main(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      corpus: { type: "string" },
      "split-file": { type: "string" },
      stopwords: { type: "string" },
      model: { type: "string", default: "hashctx-64x2" },
      strategy: { type: "string", default: "average_subwords" },
      layer: { type: "string", default: "-1" },
      "min-df": { type: "string", default: "5" },
      "whole-word-vocab": { type: "string", default: "1500" },
      out: { type: "string" },
      help: { type: "boolean", default: false },
    },
  });
  if (values.help) {
    console.log(
      "usage: context-extract --corpus FILE --stopwords FILE --out FILE\n" +
        "  [--split-file FILE] [--model hashctx-<dim>x<layers>]\n" +
        `  [--strategy ${STRATEGIES.join("|")}]\n` +
        "  [--layer N] [--min-df N] [--whole-word-vocab N]",
    );
    return 0;
  }
  for (const required of ["corpus", "stopwords", "out"] as const) {
    if (!values[required]) {
      console.error(JSON.stringify({ error: "UsageError", message: `--${required} is required` }));
      return 1;
    }
  }
  if (!STRATEGIES.includes(values.strategy as Strategy)) {
    console.error(
      JSON.stringify({ error: "UsageError", message: `unknown strategy ${values.strategy}` }),
    );
    return 1;
  }
  try {
    const stopwords = loadStopwords(values.stopwords!);
    const docs = loadLineCorpus(values.corpus!, values["split-file"] ?? null, stopwords);
    const vocabulary = buildVocabulary(docs, Number(values["min-df"]));
    const result = extract(docs, vocabulary, {
      strategy: values.strategy as Strategy,
      model: values.model,
      layer: Number(values.layer),
      wholeWordVocabSize: Number(values["whole-word-vocab"]),
    });
    writeWord2vecText(result, values.out!);
    writeSidecar(result, `${values.out}.json`);
    console.log(
      `wrote ${result.types.length}/${result.vocabularySize} type vectors ` +
        `(coverage ${result.coverage.toFixed(4)}, dim ${result.dim}) to ${values.out}`,
    );
    return 0;
  } catch (err) {
    const error = err as Error;
    console.error(JSON.stringify({ error: error.name, message: error.message }));
    return 1;
  }
}

process.exitCode = main(process.argv.slice(2));
