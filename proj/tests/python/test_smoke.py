"""Smoke tests for the dsmkit extension: one pass over the main operations."""

import math

import numpy as np
import pytest

import dsmkit

CORPUS = [
    ["the", "cat", "sat", "on", "the", "mat"],
    ["the", "dog", "sat", "on", "the", "log"],
    ["a", "cat", "and", "a", "dog", "chase", "the", "ball"],
    ["the", "dog", "likes", "the", "ball"],
    ["a", "cat", "likes", "the", "mat"],
    ["the", "sun", "is", "hot", "today"],
    ["the", "moon", "is", "cold", "tonight"],
    ["the", "cat", "likes", "the", "warm", "sun"],
]


@pytest.fixture(scope="module")
def vocab():
    return dsmkit.build_vocabulary(CORPUS, min_count=1)


@pytest.fixture(scope="module")
def counts(vocab):
    return dsmkit.extract_cooccurrence(CORPUS, vocab, context="window", radius=2)


def test_vocabulary(vocab):
    assert "cat" in vocab
    assert vocab.freq("the") == 12
    assert vocab.total_tokens == sum(len(s) for s in CORPUS)
    # ids ordered by descending frequency
    assert vocab.words[0] == "the"


def test_subsample_deterministic(vocab):
    a = dsmkit.subsample(CORPUS, vocab, threshold=0.05, seed=3)
    b = dsmkit.subsample(CORPUS, vocab, threshold=0.05, seed=3)
    assert a == b
    kept = sum(len(s) for s in a)
    assert kept <= vocab.total_tokens


def test_cooccurrence_counts(counts, vocab):
    n = len(vocab)
    assert counts.shape == (n, n)
    dense = counts.todense()
    assert dense.shape == (n, n)
    # undirected windows give a symmetric matrix
    assert np.allclose(dense, dense.T)


def test_ppmi_matches_numpy_oracle(counts):
    weighted = dsmkit.ppmi(counts, alpha=0.75)
    dense = counts.todense()
    total = dense.sum()
    pt = dense.sum(axis=1) / total
    col = dense.sum(axis=0)
    pc = col**0.75 / (col**0.75).sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log2((dense / total) / np.outer(pt, pc))
    oracle = np.where(np.isfinite(pmi) & (pmi > 0), pmi, 0.0)
    assert np.allclose(weighted.todense(), oracle, atol=1e-9)


def test_svd_embeddings(counts, vocab):
    weighted = dsmkit.ppmi(counts, alpha=0.75)
    u, s, v = dsmkit.truncated_svd(weighted, dim=4, seed=1)
    assert u.shape == (len(vocab), 4)
    assert np.all(np.diff(s) <= 1e-12)
    assert np.allclose(u.T @ u, np.eye(4), atol=1e-8)

    space = dsmkit.svd_embeddings(weighted, dim=4, seed=1)
    assert np.allclose(space.vectors, u)
    assert "singular_values" in space.meta


def test_ri_matches_counts(counts, vocab):
    space = dsmkit.train_ri(CORPUS, vocab, dim=128, delta=8, window=2, seed=9)
    assert space.dim == 128
    # static RI is the count matrix pushed through the index vectors, so
    # cosines should roughly track count-space cosines
    dense = counts.todense()
    cat, dog = vocab.words.index("cat"), vocab.words.index("dog")
    exact = np.dot(dense[cat], dense[dog]) / (
        np.linalg.norm(dense[cat]) * np.linalg.norm(dense[dog])
    )
    approx = dsmkit.cosine(space.vector("cat"), space.vector("dog"))
    assert abs(exact - approx) < 0.45


def test_embedding_roundtrip(tmp_path, counts):
    weighted = dsmkit.ppmi(counts)
    space = dsmkit.svd_embeddings(weighted, dim=3, seed=5)
    path = str(tmp_path / "space.vec")
    space.save(path)
    loaded = dsmkit.load_embeddings(path)
    assert loaded.words == space.words
    assert np.allclose(loaded.vectors, space.vectors, atol=1e-8)


def test_nearest_and_cosine():
    space = dsmkit.EmbeddingSpace(
        ["a", "b", "c"], np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]])
    )
    hits = space.nearest("a", k=2)
    assert hits[0][0] == "b"
    assert dsmkit.cosine([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)


def test_evaluate_rating(tmp_path, counts):
    weighted = dsmkit.ppmi(counts)
    space = dsmkit.svd_embeddings(weighted, dim=4, seed=2)
    ds = tmp_path / "sim.tsv"
    ds.write_text(
        "#task=similarity name=tiny\n"
        "cat\tdog\t0.9\nsun\tmoon\t0.7\ncat\tsun\t0.1\nmat\tlog\t0.6\n"
    )
    result = dsmkit.evaluate_file(space, str(ds))
    assert result["metric"] == "spearman"
    assert -1.0 <= result["score"] <= 1.0
    assert result["coverage"] == 1.0


def test_spearman_and_purity():
    assert dsmkit.spearman([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(1.0)
    assert dsmkit.spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert dsmkit.purity([0, 0, 1, 1], [1, 1, 0, 0], 2) == pytest.approx(1.0)


def test_rsa_self_correlation(counts):
    weighted = dsmkit.ppmi(counts)
    space = dsmkit.svd_embeddings(weighted, dim=4, seed=3)
    words = [w for w in space.words[:8]]
    rsm = dsmkit.build_rsm(space, words)
    assert dsmkit.rsa_correlate(rsm, rsm) == pytest.approx(1.0)
    assert np.allclose(rsm.values, rsm.values.T)


def test_sample_strata(vocab):
    samples = dsmkit.sample_strata(vocab, scheme="global", n_samples=3, sample_size=4, seed=1)
    seen = set()
    for _, words in samples:
        for w in words:
            assert w not in seen
            seen.add(w)


def test_stats():
    kw = dsmkit.kruskal_wallis([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    assert kw["H"] == pytest.approx(27.0 / 7.0)
    assert kw["df"] == 1.0

    pairs = dsmkit.dunn_test([[1.0, 2.0], [1.0, 2.0], [10.0, 11.0]])
    assert len(pairs) == 3

    w = dsmkit.wilcoxon_signed_rank([1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                                    [2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    assert w["V"] == 0.0
    assert 0.0 < w["p"] <= 1.0


def test_errors_map_to_python():
    with pytest.raises(dsmkit.DsmError):
        dsmkit.build_vocabulary([], min_count=1)
    with pytest.raises(dsmkit.DsmError):
        dsmkit.spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
