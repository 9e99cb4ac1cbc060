import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { Encoder, parseModelName } from "../src/encoder.js";
import { extract, writeSidecar, writeWord2vecText } from "../src/extract.js";
import type { CorpusDocument } from "../src/preprocess.js";
import { tokenizeWord, trainTokenizer } from "../src/tokenizer.js";

function doc(split: "train" | "test", ...sentences: string[]): CorpusDocument {
  return { split, sentences: sentences.map((s) => s.split(" ")) };
}

// frequent filler words keep the tokenizer's whole-word slots busy
const FILLER = Array.from({ length: 8 }, (_, i) => `filler${i}`);

function fillerDocs(count: number): CorpusDocument[] {
  return Array.from({ length: count }, () => doc("train", FILLER.join(" ")));
}

describe("tokenizer", () => {
  it("keeps frequent words whole and splits rare ones", () => {
    const docs = [...fillerDocs(30), doc("train", "zyxwvut")];
    const tok = trainTokenizer(docs, FILLER.length);
    expect(tokenizeWord("filler3", tok)).toEqual(["filler3"]);
    expect(tokenizeWord("zyxwvut", tok).length).toBeGreaterThan(1);
  });

  it("is greedy longest-match with single characters as last resort", () => {
    const docs = fillerDocs(5);
    const tok = trainTokenizer(docs, 2);
    const pieces = tokenizeWord("filler0x", tok);
    expect(pieces.join("")).toBe("filler0x");
    for (const p of pieces) expect(p.length).toBeLessThanOrEqual(tok.maxUnitLength);
  });
});

describe("encoder", () => {
  it("is deterministic and context-sensitive", () => {
    const enc = new Encoder(parseModelName("hashctx-16x2"));
    const a = enc.encodeSentence(["fo", "ba", "qu"]);
    const b = new Encoder(parseModelName("hashctx-16x2")).encodeSentence(["fo", "ba", "qu"]);
    expect(a[2][0]).toEqual(b[2][0]);
    const altered = enc.encodeSentence(["fo", "ba", "zz"]);
    expect(a[2][0]).not.toEqual(altered[2][0]); // same token, different context
  });

  it("rejects unknown model names", () => {
    expect(() => parseModelName("bert-base-uncased")).toThrow(/unknown model/);
  });
});

describe("extract", () => {
  it("single occurrence of a whole-word type equals that token's state", () => {
    const docs = [...fillerDocs(10), doc("train", "filler0 filler1 filler2")];
    const vocab = [...FILLER].sort();
    const result = extract(docs, vocab, { model: "hashctx-16x2" });
    // recompute the expected contextual state by hand for one sentence
    const tok = trainTokenizer(docs, 1500);
    const enc = new Encoder(parseModelName("hashctx-16x2"));
    const units = ["filler0", "filler1", "filler2"].flatMap((w) => tokenizeWord(w, tok));
    expect(units).toHaveLength(3); // all whole words
    const idx = result.types.indexOf("filler3");
    expect(idx).toBeGreaterThanOrEqual(0);
    // filler3 only ever appears in the identical filler sentence, so its
    // type vector equals its state in that sentence
    const fillerUnits = FILLER.flatMap((w) => tokenizeWord(w, tok));
    const states = enc.encodeSentence(fillerUnits)[2];
    const expected = states[FILLER.indexOf("filler3")];
    for (let d = 0; d < 16; d++) {
      expect(result.vectors[idx][d]).toBeCloseTo(expected[d], 12);
    }
  });

  it("skip_subword_types omits split words; coverage strictly below average", () => {
    const docs = [...fillerDocs(20), doc("train", "unbelievers filler0"),
                  doc("train", "unbelievers filler1")];
    const vocab = [...FILLER, "unbelievers"].sort();
    const avg = extract(docs, vocab, { model: "hashctx-16x1", wholeWordVocabSize: FILLER.length });
    const ns = extract(docs, vocab, {
      model: "hashctx-16x1",
      strategy: "skip_subword_types",
      wholeWordVocabSize: FILLER.length,
    });
    expect(avg.types).toContain("unbelievers");
    expect(ns.types).not.toContain("unbelievers");
    expect(ns.coverage).toBeLessThan(avg.coverage);
  });

  it("first_subword differs from averaging only for split words", () => {
    const docs = [...fillerDocs(20), doc("train", "unbelievers filler0")];
    const vocab = [...FILLER, "unbelievers"].sort();
    const opts = { model: "hashctx-16x1", wholeWordVocabSize: FILLER.length };
    const avg = extract(docs, vocab, opts);
    const first = extract(docs, vocab, { ...opts, strategy: "first_subword" });
    const pick = (r: typeof avg, t: string) => r.vectors[r.types.indexOf(t)];
    expect(pick(first, "filler0")).toEqual(pick(avg, "filler0"));
    expect(pick(first, "unbelievers")).not.toEqual(pick(avg, "unbelievers"));
  });

  it("types never observed in the corpus are omitted", () => {
    const docs = fillerDocs(10);
    const vocab = [...FILLER, "ghostword"].sort();
    const result = extract(docs, vocab, { model: "hashctx-16x1" });
    expect(result.types).not.toContain("ghostword");
    expect(result.coverage).toBeCloseTo(FILLER.length / vocab.length, 12);
  });

  it("writes word2vec text plus a faithful sidecar", () => {
    const dir = mkdtempSync(join(tmpdir(), "extract-"));
    const docs = fillerDocs(10);
    const result = extract(docs, [...FILLER].sort(), { model: "hashctx-8x1" });
    const out = join(dir, "v.w2v.txt");
    writeWord2vecText(result, out);
    writeSidecar(result, `${out}.json`);
    const lines = readFileSync(out, "utf-8").trimEnd().split("\n");
    expect(lines[0]).toBe(`${FILLER.length} 8`);
    expect(lines).toHaveLength(FILLER.length + 1);
    expect(lines[1].split(" ")).toHaveLength(9);
    const sidecar = JSON.parse(readFileSync(`${out}.json`, "utf-8"));
    expect(sidecar).toMatchObject({
      model: "hashctx-8x1",
      layer: 1,
      strategy: "average_subwords",
      dim: 8,
      coverage: 1,
    });
  });

  it("is deterministic end to end", () => {
    const docs = [...fillerDocs(15), doc("train", "unbelievers filler0")];
    const vocab = [...FILLER, "unbelievers"].sort();
    const a = extract(docs, vocab, {});
    const b = extract(docs, vocab, {});
    expect(a.types).toEqual(b.types);
    a.vectors.forEach((vec, i) => expect(vec).toEqual(b.vectors[i]));
  });
});
