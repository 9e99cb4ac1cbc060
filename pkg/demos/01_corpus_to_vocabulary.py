# Walk through corpus ingestion: preprocessing rules, the train/test split,
# and the vocabulary statistics every later stage consumes.

from clustertopics import synth
from clustertopics.corpus import build_vocabulary, load_stopwords, preprocess

# ------------------------------------------------------------------
# 1) Preprocessing: lowercase, strip wrapping punctuation, drop tokens
#    containing digits or inner punctuation, drop stopwords.
stopwords = load_stopwords()
raw = 'The CPU runs at 3GHz!  "Fast", they said -- state-of-the-art.'
print("raw:   ", raw)
print("tokens:", preprocess(raw, stopwords))

# ------------------------------------------------------------------
# 2) A corpus is a list of Documents tagged train/test.  The bundled
#    generator builds a themed corpus; real loaders (load_20ng, load_lines)
#    produce exactly the same structure from files.
corpus = synth.generate(synth.SynthConfig(
    n_themes=3, exclusive_per_theme=60, bursty_per_theme=10,
    n_train_docs=300, n_test_docs=200, seed=11,
))
print(f"\ndocuments: {len(corpus.docs)} "
      f"({len(corpus.train_docs)} train / {len(corpus.test_docs)} test)")
print("one document:", " ".join(corpus.train_docs[0].tokens[:12]), "...")

# ------------------------------------------------------------------
# 3) The vocabulary counts types over the train split only and drops
#    anything seen in fewer than five documents.
vocab = build_vocabulary(corpus.train_docs, min_df=5)
print(f"\nvocabulary: {len(vocab)} types, {vocab.total_tokens} tokens, "
      f"{vocab.num_docs} documents")
top = sorted(zip(vocab.term_freq, vocab.types), reverse=True)[:5]
print("most frequent types:", [(t, c) for c, t in top])
rarest = min(vocab.doc_freq)
print(f"minimum document frequency in vocabulary: {rarest} (filter holds)")
