import numpy as np

from clustertopics import synth
from clustertopics.corpus import load_lines, load_stopwords


def test_generation_is_deterministic():
    a = synth.generate(synth.SynthConfig(seed=3, n_train_docs=60, n_test_docs=40,
                                         exclusive_per_theme=30, bursty_per_theme=5))
    b = synth.generate(synth.SynthConfig(seed=3, n_train_docs=60, n_test_docs=40,
                                         exclusive_per_theme=30, bursty_per_theme=5))
    assert a.types == b.types
    assert [d.tokens for d in a.docs] == [d.tokens for d in b.docs]
    np.testing.assert_array_equal(a.vectors, b.vectors)


def test_words_survive_preprocessing_unchanged():
    corpus = synth.generate(synth.SynthConfig(seed=4, n_train_docs=40, n_test_docs=20,
                                              exclusive_per_theme=25, bursty_per_theme=4))
    stop = load_stopwords()
    for word in corpus.types:
        assert word.isalpha() and word == word.lower()
        assert word not in stop


def test_split_sizes_and_round_trip(tmp_path):
    cfg = synth.SynthConfig(seed=6, n_train_docs=50, n_test_docs=30,
                            exclusive_per_theme=25, bursty_per_theme=4)
    corpus = synth.generate(cfg)
    assert len(corpus.train_docs) == 50
    assert len(corpus.test_docs) == 30
    synth.write_corpus(corpus, tmp_path / "docs.txt", tmp_path / "split.txt")
    loaded = load_lines(tmp_path / "docs.txt", tmp_path / "split.txt")
    assert [d.split for d in loaded] == [d.split for d in corpus.docs]
    # generated words pass preprocessing untouched, so tokens round-trip
    assert [list(d.tokens) for d in loaded] == [list(d.tokens) for d in corpus.docs]


def test_embedding_file_skips_oov_types(tmp_path):
    cfg = synth.SynthConfig(seed=7, n_train_docs=40, n_test_docs=20,
                            exclusive_per_theme=25, bursty_per_theme=4)
    corpus = synth.generate(cfg)
    assert corpus.oov_types
    path = tmp_path / "vec.txt"
    synth.write_embedding_file(corpus, path)
    words_in_file = {line.split(" ", 1)[0] for line in path.read_text().splitlines()}
    assert words_in_file == set(corpus.types) - corpus.oov_types


def test_embedding_variant_same_shape_different_geometry():
    cfg = synth.SynthConfig(seed=8, n_train_docs=40, n_test_docs=20,
                            exclusive_per_theme=25, bursty_per_theme=4)
    corpus = synth.generate(cfg)
    alt = synth.embedding_variant(corpus, seed=99)
    assert alt.shape == corpus.vectors.shape
    assert not np.allclose(alt, corpus.vectors)


def test_make_blobs_shapes_and_determinism():
    a = synth.make_blobs(100, 5, 3, seed=1)
    b = synth.make_blobs(100, 5, 3, seed=1)
    assert a.shape == (100, 5)
    np.testing.assert_array_equal(a, b)
