// Preprocessing parity with the main pipeline is load-bearing: the extractor
// must see exactly the vocabulary the clustering side counts. The parity
// tests run the pipeline's own CLI and compare outputs token for token.

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import {
  buildVocabulary,
  loadLineCorpus,
  loadStopwords,
  preprocess,
  splitSentences,
} from "../src/preprocess.js";

const STOPWORDS = join(__dirname, "../../src/clustertopics/data/stopwords_en.txt");

const RAW_DOCS = [
  'The CPU runs at 3GHz! "Fast", they said -- state-of-the-art.',
  "Rendering polygons quickly beats waiting. Try it; you will see!",
  "Email me... price: $40 obo. Old drives (SCSI-1) relabeled.",
  "plain lowercase words with no punctuation at all",
];

describe("preprocess", () => {
  const stopwords = loadStopwords(STOPWORDS);

  it("applies the documented rules", () => {
    expect(preprocess("The CPU runs at 3GHz!", stopwords)).toEqual(["cpu", "runs"]);
    expect(preprocess("", stopwords)).toEqual([]);
    expect(preprocess("state-of-the-art isn't o'clock", stopwords)).toEqual([]);
    expect(preprocess("(hello) [world]!!", stopwords)).toEqual(["hello", "world"]);
  });

  it("splits sentences at terminal punctuation", () => {
    expect(splitSentences("One here. Two now! Three? yes")).toEqual([
      "One here.",
      "Two now!",
      "Three?",
      "yes",
    ]);
    expect(splitSentences("no terminal punctuation")).toEqual([
      "no terminal punctuation",
    ]);
  });
});

describe("parity with the pipeline CLI", () => {
  let out: string;
  let corpus: string;
  let split: string;

  beforeAll(() => {
    const dir = mkdtempSync(join(tmpdir(), "parity-"));
    corpus = join(dir, "docs.txt");
    split = join(dir, "split.txt");
    out = join(dir, "out");
    writeFileSync(corpus, RAW_DOCS.join("\n") + "\n");
    writeFileSync(split, "3\n"); // line 3 is a test document
    execFileSync("python3", [
      "-m", "clustertopics", "preprocess",
      "--corpus", corpus, "--split-file", split,
      "--stopwords", STOPWORDS, "--min-df", "1", "--out", out,
    ]);
  });

  it("tokenizes identically to the pipeline", () => {
    const stopwords = loadStopwords(STOPWORDS);
    const pipelineTrain = readFileSync(join(out, "tokens-train.txt"), "utf-8")
      .split("\n")
      .filter((l, i, arr) => i < arr.length - 1 || l !== "");
    const mine = RAW_DOCS.filter((_, i) => i !== 2).map((doc) =>
      preprocess(doc, stopwords).join(" "),
    );
    expect(pipelineTrain).toEqual(mine);
  });

  it("builds the same vocabulary", () => {
    const stopwords = loadStopwords(STOPWORDS);
    const docs = loadLineCorpus(corpus, split, stopwords);
    const mine = buildVocabulary(docs, 1);
    const pipelineTypes = readFileSync(join(out, "vocabulary.tsv"), "utf-8")
      .split("\n")
      .filter((line) => line && !line.startsWith("#"))
      .map((line) => line.split("\t")[0]);
    expect(mine).toEqual(pipelineTypes);
  });

  it("sentence splitting never changes the token stream", () => {
    const stopwords = loadStopwords(STOPWORDS);
    for (const doc of RAW_DOCS) {
      const whole = preprocess(doc, stopwords);
      const bySentence = splitSentences(doc).flatMap((s) => preprocess(s, stopwords));
      expect(bySentence).toEqual(whole);
    }
  });
});
