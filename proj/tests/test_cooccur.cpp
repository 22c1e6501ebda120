#include <doctest.h>

#include <map>
#include <random>

#include "dsm/cooccur.hpp"
#include "test_util.hpp"

using namespace dsm;
using testutil::sentences;
using testutil::TempDir;

namespace {

// Brute-force window oracle: enumerate all ordered position pairs.
std::map<std::pair<std::string, std::string>, double> window_oracle(
    const std::vector<Sentence>& corpus, const Vocabulary& vocab, int radius) {
    std::map<std::pair<std::string, std::string>, double> counts;
    for (const auto& s : corpus) {
        const int n = static_cast<int>(s.tokens.size());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j || std::abs(i - j) > radius) continue;
                if (!vocab.id_of(s.tokens[i]) || !vocab.id_of(s.tokens[j])) continue;
                counts[{s.tokens[i], s.tokens[j]}] += 1.0;
            }
        }
    }
    return counts;
}

std::map<std::pair<std::string, std::string>, double> as_map(
    const SparseCooccurrenceMatrix& m) {
    std::map<std::pair<std::string, std::string>, double> out;
    for (const auto& e : m.entries) {
        out[{m.row_labels[e.row], m.col_labels[e.col]}] = e.value;
    }
    return out;
}

ContextSpec window_spec(int radius) {
    ContextSpec spec;
    spec.kind = ContextKind::Window;
    spec.window_radius = radius;
    return spec;
}

}  // namespace

TEST_CASE("window counts for 'a b c' radius 1") {
    auto corpus = sentences("a b c");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(1));
    auto counts = as_map(m);
    CHECK(counts.size() == 4);
    CHECK(counts.at({"a", "b"}) == 1.0);
    CHECK(counts.at({"b", "a"}) == 1.0);
    CHECK(counts.at({"b", "c"}) == 1.0);
    CHECK(counts.at({"c", "b"}) == 1.0);
    CHECK(m.grand_total == 4.0);
}

TEST_CASE("single-token sentences produce no window entries") {
    auto corpus = sentences("lonely");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(2));
    CHECK(m.nnz() == 0);
}

TEST_CASE("radius >= sentence length counts every ordered pair once") {
    auto corpus = sentences("p q r s");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(10));
    auto oracle = window_oracle(corpus, vocab, 10);
    CHECK(as_map(m) == oracle);
    CHECK(m.grand_total == 12.0);  // 4*3 ordered pairs
}

TEST_CASE("windows do not cross sentence boundaries") {
    auto corpus = sentences("a b / c d");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(5));
    auto counts = as_map(m);
    CHECK(counts.count({"b", "c"}) == 0);
    CHECK(counts.count({"a", "d"}) == 0);
    CHECK(counts.at({"a", "b"}) == 1.0);
    CHECK(counts.at({"c", "d"}) == 1.0);
}

TEST_CASE("window extraction matches the brute-force oracle on random corpora") {
    std::mt19937_64 rng(2024);
    const char* words[] = {"u", "v", "w", "x", "y", "z"};
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Sentence> corpus;
        int n_sentences = 1 + static_cast<int>(rng() % 5);
        for (int si = 0; si < n_sentences; ++si) {
            Sentence s;
            int len = 1 + static_cast<int>(rng() % 12);
            for (int i = 0; i < len; ++i) s.tokens.push_back(words[rng() % 6]);
            corpus.push_back(s);
        }
        Vocabulary vocab = testutil::vocab_of(corpus);
        int radius = 1 + static_cast<int>(rng() % 4);
        VectorReader reader(corpus);
        auto m = extract_window(reader, vocab, window_spec(radius));
        CHECK(as_map(m) == window_oracle(corpus, vocab, radius));
    }
}

TEST_CASE("window matrices are symmetric with grand total twice the pair count") {
    auto corpus = sentences("a b c a b / c c a");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(2));
    double unordered_pairs = 0.0;
    for (const auto& s : corpus) {
        const int n = static_cast<int>(s.tokens.size());
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n && j <= i + 2; ++j) unordered_pairs += 1.0;
        }
    }
    CHECK(m.grand_total == 2.0 * unordered_pairs);
    for (const auto& e : m.entries) {
        CHECK(m.value_at(e.col, e.row) == e.value);
    }
}

TEST_CASE("out-of-vocabulary tokens keep their positions but produce no pairs") {
    auto corpus = sentences("a zz b");  // zz will fall below min_count 2
    corpus.push_back(sentences("a b")[0]);
    Vocabulary vocab = testutil::vocab_of(corpus, 2);
    REQUIRE_FALSE(vocab.id_of("zz").has_value());
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(1));
    auto counts = as_map(m);
    // In "a zz b" the gap stays: a and b are 2 apart, outside radius 1.
    CHECK(counts.at({"a", "b"}) == 1.0);  // only from the second sentence
}

TEST_CASE("typed dependency contexts follow the direct/inverse naming") {
    std::vector<Sentence> corpus;
    Sentence s;
    s.tokens = {"the", "dog", "barks"};
    s.deps = {DepArc{2, 1, "nsubj"}, DepArc{1, 0, "det"}};
    corpus.push_back(s);
    Vocabulary vocab = testutil::vocab_of(corpus);

    ContextSpec spec;
    spec.kind = ContextKind::DepTyped;
    spec.typed_min_freq = 0;
    VectorReader reader(corpus);
    auto m = extract_dependency(reader, vocab, spec);
    auto counts = as_map(m);
    CHECK(counts.at({"barks", "nsubj-dog"}) == 1.0);
    CHECK(counts.at({"dog", "nsubj-inv-barks"}) == 1.0);
    CHECK(counts.at({"dog", "det-the"}) == 1.0);
    CHECK(counts.at({"the", "det-inv-dog"}) == 1.0);
}

TEST_CASE("filtered dependency contexts add both arc directions") {
    std::vector<Sentence> corpus;
    Sentence s;
    s.tokens = {"the", "dog", "barks"};
    s.deps = {DepArc{2, 1, "nsubj"}};
    corpus.push_back(s);
    Vocabulary vocab = testutil::vocab_of(corpus);

    ContextSpec spec;
    spec.kind = ContextKind::DepFiltered;
    VectorReader reader(corpus);
    auto m = extract_dependency(reader, vocab, spec);
    auto counts = as_map(m);
    CHECK(counts.size() == 2);
    CHECK(counts.at({"barks", "dog"}) == 1.0);
    CHECK(counts.at({"dog", "barks"}) == 1.0);
}

TEST_CASE("typed pruning with a huge threshold empties the matrix") {
    std::vector<Sentence> corpus;
    Sentence s;
    s.tokens = {"dog", "barks"};
    s.deps = {DepArc{1, 0, "nsubj"}};
    corpus.push_back(s);
    Vocabulary vocab = testutil::vocab_of(corpus);
    ContextSpec spec;
    spec.kind = ContextKind::DepTyped;
    spec.typed_min_freq = 1000;
    VectorReader reader(corpus);
    auto m = extract_dependency(reader, vocab, spec);
    CHECK(m.nnz() == 0);
    CHECK(m.cols() == 0);
}

TEST_CASE("arcs touching out-of-vocabulary words are skipped silently") {
    std::vector<Sentence> corpus;
    Sentence s;
    s.tokens = {"rare", "dog", "dog"};
    s.deps = {DepArc{1, 0, "amod"}, DepArc{2, 1, "conj"}};
    corpus.push_back(s);
    Vocabulary vocab = testutil::vocab_of(corpus, 2);  // only "dog" survives
    ContextSpec spec;
    spec.kind = ContextKind::DepFiltered;
    VectorReader reader(corpus);
    auto m = extract_dependency(reader, vocab, spec);
    auto counts = as_map(m);
    // Only the dog-dog arc survives; both directions land in one cell.
    CHECK(counts.size() == 1);
    CHECK(counts.at({"dog", "dog"}) == 2.0);
}

TEST_CASE("document extraction counts words per document") {
    auto corpus = sentences("a a | a b");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_document(reader, vocab);
    auto counts = as_map(m);
    CHECK(counts.at({"a", "d0"}) == 2.0);
    CHECK(counts.at({"a", "d1"}) == 1.0);
    CHECK(counts.at({"b", "d1"}) == 1.0);
}

TEST_CASE("one-document corpora put the whole vocabulary mass in one column") {
    auto corpus = sentences("a b b / c a b");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_document(reader, vocab);
    REQUIRE(m.cols() == 1);
    CHECK(m.col_marginals[0] == 6.0);
}

TEST_CASE("sharded extraction merged equals the single pass") {
    auto corpus = sentences("a b c d / b c d a / d d a b / c b a a");
    Vocabulary vocab = testutil::vocab_of(corpus);

    VectorReader whole(corpus);
    auto single = extract_window(whole, vocab, window_spec(2));

    std::vector<Sentence> first_half(corpus.begin(), corpus.begin() + 2);
    std::vector<Sentence> second_half(corpus.begin() + 2, corpus.end());
    CoocBuilder merged(vocab.words, ContextKind::Window);
    for (const auto& w : vocab.words) merged.context_id(w);
    for (const auto& shard : {first_half, second_half}) {
        CoocBuilder builder(vocab.words, ContextKind::Window);
        for (const auto& w : vocab.words) builder.context_id(w);
        for (const auto& s : shard) {
            const int n = static_cast<int>(s.tokens.size());
            for (int i = 0; i < n; ++i) {
                for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
                    if (i == j) continue;
                    builder.add(*vocab.id_of(s.tokens[i]), *vocab.id_of(s.tokens[j]), 1.0);
                }
            }
        }
        merged.merge(builder);
    }
    auto combined = std::move(merged).finalize();
    CHECK(as_map(combined) == as_map(single));
}

TEST_CASE("prune_contexts keeps the top-k columns by marginal") {
    // Contexts with marginals 5, 3, 1.
    auto corpus = sentences("x a / x a / x a / y a / y a / z a");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(1));
    // column marginal of each context word: a appears as context 6 times;
    // x 3, y 2, z 1.
    auto pruned = prune_contexts(m, 2);
    CHECK(pruned.cols() == 2);
    CHECK(pruned.col_ids.count("a") == 1);
    CHECK(pruned.col_ids.count("x") == 1);
    CHECK(pruned.col_ids.count("y") == 0);
    CHECK(pruned.col_ids.count("z") == 0);
    // Marginals follow the surviving entries.
    double total = 0.0;
    for (const auto& e : pruned.entries) total += e.value;
    CHECK(pruned.grand_total == total);
}

TEST_CASE("prune_contexts with top_k >= |C| is the identity") {
    auto corpus = sentences("a b c / b c a");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(1));
    auto pruned = prune_contexts(m, m.cols() + 10);
    CHECK(as_map(pruned) == as_map(m));
    CHECK(pruned.cols() == m.cols());
}

TEST_CASE("marginals stay consistent with recomputation") {
    auto corpus = sentences("a b c a / c b a b / a c");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(3));
    auto rows = m.row_marginals;
    auto cols = m.col_marginals;
    double total = m.grand_total;
    m.recompute_marginals();
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(m.row_marginals[i] == doctest::Approx(rows[i]).epsilon(1e-9));
    }
    for (size_t i = 0; i < cols.size(); ++i) {
        CHECK(m.col_marginals[i] == doctest::Approx(cols[i]).epsilon(1e-9));
    }
    CHECK(m.grand_total == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("matrix files round-trip through save and load") {
    auto corpus = sentences("a b c / b c d / d a");
    Vocabulary vocab = testutil::vocab_of(corpus);
    VectorReader reader(corpus);
    auto m = extract_window(reader, vocab, window_spec(2));
    TempDir dir("matrix");
    save_matrix(m, dir.file("m.tsv"));
    auto loaded = load_matrix(dir.file("m.tsv"));
    CHECK(loaded.kind == ContextKind::Window);
    CHECK(loaded.row_labels == m.row_labels);
    CHECK(loaded.col_labels == m.col_labels);
    CHECK(as_map(loaded) == as_map(m));
    CHECK(loaded.meta.at("window_radius") == "2");
}
