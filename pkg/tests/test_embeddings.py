import struct

import numpy as np
import pytest

from clustertopics.corpus import build_vocabulary
from clustertopics.embeddings import (
    EmbeddingTable,
    load_embeddings,
    normalize_rows,
    pca_reduce,
    save_word2vec_text,
)
from clustertopics.errors import DimensionMismatch, FormatError, RankDeficient, ZeroVector
from conftest import make_docs


@pytest.fixture
def abc_vocab():
    return build_vocabulary(make_docs([["a", "b", "c"]] * 5), min_df=1)


class TestLoaders:
    def test_glove_text(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1.0 2.0\nb 3.0 4.0\n")
        table, reduced = load_embeddings(f, "glove_text", abc_vocab)
        assert table.vectors.shape == (2, 2)
        assert reduced.types == ("a", "b")
        assert table.coverage == pytest.approx(2 / 3)
        np.testing.assert_array_equal(table.vectors, [[1.0, 2.0], [3.0, 4.0]])

    def test_word2vec_text(self, tmp_path, abc_vocab):
        f = tmp_path / "v.w2v.txt"
        f.write_text("2 3\nb 1 2 3\na 4 5 6\n")
        table, reduced = load_embeddings(f, "word2vec_text", abc_vocab)
        assert table.vectors.shape == (2, 3)
        # rows follow vocabulary (lexicographic) order, not file order
        np.testing.assert_array_equal(table.vectors[0], [4.0, 5.0, 6.0])

    def test_word2vec_binary(self, tmp_path, abc_vocab):
        f = tmp_path / "v.w2v.bin"
        payload = b"2 2\n"
        payload += b"a " + struct.pack("<2f", 1.5, -2.5) + b"\n"
        payload += b"c " + struct.pack("<2f", 0.25, 8.0) + b"\n"
        f.write_bytes(payload)
        table, reduced = load_embeddings(f, "word2vec_binary", abc_vocab)
        assert reduced.types == ("a", "c")
        np.testing.assert_array_equal(table.vectors, [[1.5, -2.5], [0.25, 8.0]])

    def test_counts_untouched_by_reduction(self, tmp_path):
        docs = make_docs([["a", "b"], ["a", "c"], ["b", "c"], ["a"]])
        vocab = build_vocabulary(docs, min_df=1)
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1 0\nc 0 1\n")
        _, reduced = load_embeddings(f, "glove_text", vocab)
        assert reduced.types == ("a", "c")
        assert reduced.term_freq == (3, 2)
        assert reduced.total_tokens == vocab.total_tokens
        assert reduced.num_docs == vocab.num_docs

    def test_duplicate_entry_first_wins(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1 1\na 9 9\n")
        table, _ = load_embeddings(f, "glove_text", abc_vocab)
        np.testing.assert_array_equal(table.vectors, [[1.0, 1.0]])

    def test_zero_vector_dropped_as_uncovered(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 0 0\nb 1 2\n")
        table, reduced = load_embeddings(f, "glove_text", abc_vocab)
        assert reduced.types == ("b",)

    def test_format_error_reports_line(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1.0 2.0\nb 3.0 oops\n")
        with pytest.raises(FormatError, match="line 2"):
            load_embeddings(f, "glove_text", abc_vocab)

    def test_dimension_mismatch(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1.0 2.0\nb 3.0\n")
        with pytest.raises(DimensionMismatch):
            load_embeddings(f, "glove_text", abc_vocab)

    def test_non_finite_rejected(self, tmp_path, abc_vocab):
        f = tmp_path / "v.glove.txt"
        f.write_text("a 1.0 nan\n")
        with pytest.raises(FormatError, match="non-finite"):
            load_embeddings(f, "glove_text", abc_vocab)

    def test_alignment_spot_check_against_reference_parse(self, tmp_path):
        # 20 random types re-parsed line by line must match the table rows
        # bit for bit at their vocabulary positions
        rng = np.random.default_rng(11)
        words = sorted(f"w{i:03d}" for i in range(100))
        lines = [
            w + " " + " ".join(repr(float(v)) for v in rng.standard_normal(8))
            for w in rng.permutation(words)
        ]
        f = tmp_path / "big.glove.txt"
        f.write_text("\n".join(lines) + "\n")
        vocab = build_vocabulary(make_docs([words] * 5), min_df=1)
        table, reduced = load_embeddings(f, "glove_text", vocab)
        by_word = {line.split(" ", 1)[0]: line for line in lines}
        for w in rng.choice(words, size=20, replace=False):
            reference = np.array(
                [float(x) for x in by_word[w].split(" ")[1:]], dtype=np.float64
            )
            np.testing.assert_array_equal(table.vectors[reduced.index[w]], reference)

    def test_word2vec_text_round_trip_bit_exact(self, tmp_path, abc_vocab):
        rng = np.random.default_rng(0)
        vectors = rng.standard_normal((3, 7))
        table = EmbeddingTable(vectors=vectors, source_name="x")
        out = tmp_path / "cache.w2v.txt"
        save_word2vec_text(table, abc_vocab, out)
        reloaded, reduced = load_embeddings(out, "word2vec_text", abc_vocab)
        assert reduced.types == abc_vocab.types
        np.testing.assert_array_equal(reloaded.vectors, vectors)


class TestNormalizeRows:
    def test_three_four_five(self):
        t = EmbeddingTable(np.array([[3.0, 4.0]]), "x")
        np.testing.assert_allclose(normalize_rows(t).vectors, [[0.6, 0.8]])

    def test_idempotent(self):
        t = EmbeddingTable(np.array([[0.6, 0.8], [1.0, 0.0]]), "x")
        once = normalize_rows(t)
        twice = normalize_rows(once)
        np.testing.assert_allclose(twice.vectors, once.vectors, atol=1e-12)

    def test_random_norms_in_band(self):
        rng = np.random.default_rng(1)
        t = EmbeddingTable(rng.standard_normal((100, 50)), "x")
        norms = np.linalg.norm(normalize_rows(t).vectors, axis=1)
        assert np.all(np.abs(norms - 1.0) <= 1e-6)

    def test_zero_row_raises(self):
        with pytest.raises(ZeroVector):
            normalize_rows(EmbeddingTable(np.array([[0.0, 0.0]]), "x"))


class TestPcaReduce:
    def test_full_dimension_is_isometry_of_centered_data(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((40, 6))
        table = EmbeddingTable(X, "x")
        out = pca_reduce(table, 6)
        d_in = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
        d_out = np.linalg.norm(out.vectors[:, None, :] - out.vectors[None, :, :], axis=2)
        np.testing.assert_allclose(d_out, d_in, atol=1e-8)

    def test_collinear_points_exact_in_one_dimension(self):
        X = np.array([[0.0, 0.0], [1.0, 2.0], [3.0, 6.0]])
        out = pca_reduce(EmbeddingTable(X, "x"), 1)
        d_in = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
        d_out = np.abs(out.vectors[:, None, 0] - out.vectors[None, :, 0])
        np.testing.assert_allclose(d_out, d_in, atol=1e-12)

    def test_reconstruction_error_matches_eigendecomposition(self):
        # independent oracle: eigenvalues of the covariance computed directly
        rng = np.random.default_rng(3)
        X = rng.standard_normal((200, 20)) @ np.diag(np.linspace(0.2, 3.0, 20))
        target = 5
        out = pca_reduce(EmbeddingTable(X, "x"), target)
        centered = X - X.mean(axis=0)
        recon_error = (centered**2).sum() - (out.vectors**2).sum()
        eigvals = np.linalg.eigvalsh(centered.T @ centered)[::-1]
        np.testing.assert_allclose(recon_error, eigvals[target:].sum(), atol=1e-8)

    def test_variance_monotone_in_target_dim(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((50, 8))
        table = EmbeddingTable(X, "x")
        captured = [
            (pca_reduce(table, d).vectors ** 2).sum() for d in range(1, 9)
        ]
        assert all(b >= a - 1e-9 for a, b in zip(captured, captured[1:]))

    def test_rank_deficient(self):
        X = np.zeros((5, 3))
        X[:, 0] = np.arange(5)
        with pytest.raises(RankDeficient):
            pca_reduce(EmbeddingTable(X, "x"), 2)

    def test_deterministic_signs(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((30, 4))
        a = pca_reduce(EmbeddingTable(X, "x"), 3)
        b = pca_reduce(EmbeddingTable(X.copy(), "x"), 3)
        np.testing.assert_array_equal(a.vectors, b.vectors)
