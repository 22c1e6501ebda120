#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "dsm/embedding.hpp"
#include "test_util.hpp"

using namespace dsm;
using testutil::TempDir;

namespace {

EmbeddingSpace make_space(const std::vector<std::string>& words,
                          const std::vector<std::vector<double>>& rows) {
    RowMatrixXd m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return EmbeddingSpace(words, std::move(m));
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("cosine basics") {
    CHECK(cosine(vec2(3, 4), vec2(3, 4)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(vec2(1, 0), vec2(0, 1)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cosine(vec2(1, 2), vec2(2, 1)) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(cosine(vec2(0, 0), vec2(1, 1)), ZeroVectorError);
}

TEST_CASE("nearest never returns the excluded query word") {
    auto space = make_space({"a", "b", "c"}, {{1, 0}, {0.9, 0.1}, {0, 1}});
    auto hits = nearest(space, space.vector_of("a"), 2, {"a"});
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].word == "b");
    CHECK(hits[0].rank == 1);
    CHECK(hits[1].word == "c");
}

TEST_CASE("nearest matches a brute-force sort on a hand-set space") {
    auto space = make_space({"x", "y", "z"}, {{1, 1}, {2, 0.5}, {-1, 0.5}});
    Eigen::VectorXd q = vec2(1, 0.4);
    std::vector<std::pair<double, std::string>> brute;
    for (const auto& w : space.words) {
        brute.emplace_back(cosine(space.vector_of(w), q), w);
    }
    std::sort(brute.begin(), brute.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    auto hits = nearest(space, q, 3);
    REQUIRE(hits.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(hits[i].word == brute[i].second);
        CHECK(hits[i].score == doctest::Approx(brute[i].first).epsilon(1e-12));
    }
}

TEST_CASE("excluding the whole vocabulary yields an empty result") {
    auto space = make_space({"a", "b"}, {{1, 0}, {0, 1}});
    auto hits = nearest(space, vec2(1, 1), 5, {"a", "b"});
    CHECK(hits.empty());
}

TEST_CASE("tied scores order lexicographically and k beyond candidates returns all") {
    auto space = make_space({"beta", "alpha", "gamma"}, {{2, 0}, {1, 0}, {0, 1}});
    auto hits = nearest(space, vec2(1, 0), 10);
    REQUIRE(hits.size() == 3);  // k > candidates
    CHECK(hits[0].word == "alpha");  // cos = 1 tie with beta
    CHECK(hits[1].word == "beta");
    CHECK(hits[2].word == "gamma");
}

TEST_CASE("zero rows are kept in the space but never returned as neighbors") {
    auto space = make_space({"a", "zero", "b"}, {{1, 0}, {0, 0}, {0.5, 0.5}});
    CHECK(space.zero_rows() == std::vector<uint32_t>{1});
    auto hits = nearest(space, vec2(1, 1), 3);
    REQUIRE(hits.size() == 2);
    for (const auto& h : hits) CHECK(h.word != "zero");
}

TEST_CASE("nearest is invariant under query scaling and global rotation") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    const int n = 20, dim = 6;
    RowMatrixXd m(n, dim);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
    }
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
    EmbeddingSpace space(words, m);

    Eigen::VectorXd q(dim);
    for (int j = 0; j < dim; ++j) q[j] = gauss(rng);

    auto base = nearest(space, q, 5);
    auto scaled = nearest(space, Eigen::VectorXd(3.7 * q), 5);
    REQUIRE(base.size() == scaled.size());
    for (size_t i = 0; i < base.size(); ++i) CHECK(base[i].word == scaled[i].word);

    // Random orthogonal transform via QR.
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd rot = qr.householderQ();
    EmbeddingSpace rotated(words, RowMatrixXd(m * rot.transpose()));
    auto rotated_hits = nearest(rotated, Eigen::VectorXd(rot * q), 5);
    REQUIRE(rotated_hits.size() == base.size());
    for (size_t i = 0; i < base.size(); ++i) CHECK(base[i].word == rotated_hits[i].word);
}

TEST_CASE("word2vec text round-trips bit-identically at 9 significant digits") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    RowMatrixXd m(5, 3);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = gauss(rng);
    }
    EmbeddingSpace space({"aa", "bb", "cc", "dd", "ee"}, m);
    TempDir dir("vec");
    export_text(space, dir.file("a.vec"));
    auto loaded = import_text(dir.file("a.vec"));
    CHECK(loaded.words == space.words);
    CHECK((loaded.vectors - space.vectors).cwiseAbs().maxCoeff() < 1e-8);
    export_text(loaded, dir.file("b.vec"));
    CHECK(testutil::read_file(dir.file("a.vec")) == testutil::read_file(dir.file("b.vec")));
}

TEST_CASE("import rejects malformed embedding files") {
    TempDir dir("badvec");
    testutil::write_file(dir.file("short.vec"), "2 3\na 1 2 3\n");
    CHECK_THROWS_AS(import_text(dir.file("short.vec")), FormatError);

    testutil::write_file(dir.file("wide.vec"), "1 3\na 1 2 3 4\n");
    CHECK_THROWS_AS(import_text(dir.file("wide.vec")), FormatError);

    testutil::write_file(dir.file("narrow.vec"), "1 3\na 1 2\n");
    CHECK_THROWS_AS(import_text(dir.file("narrow.vec")), FormatError);

    testutil::write_file(dir.file("dup.vec"), "2 2\na 1 2\na 3 4\n");
    CHECK_THROWS_AS(import_text(dir.file("dup.vec")), FormatError);
}

TEST_CASE("pool_tokens averages token vectors per word") {
    TempDir dir("pool");
    testutil::write_file(dir.file("tokens.tsv"),
                         "w\t0\t1,0\n"
                         "w\t1\t0,1\n"
                         "w\t2\t2,2\n"
                         "same\t0\t3,4\n"
                         "same\t1\t3,4\n");
    auto space = pool_tokens(dir.file("tokens.tsv"));
    CHECK((space.vector_of("w") - vec2(1, 1)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((space.vector_of("same") - vec2(3, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("opposite token vectors pool to a flagged zero vector") {
    TempDir dir("pool0");
    testutil::write_file(dir.file("tokens.tsv"),
                         "w\t0\t1,-2\n"
                         "w\t1\t-1,2\n");
    WarningList warnings;
    auto space = pool_tokens(dir.file("tokens.tsv"), &warnings);
    CHECK(space.vector_of("w").cwiseAbs().maxCoeff() == 0.0);
    CHECK(space.meta.at("zero_rows") == "1");
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("pool_tokens rejects inconsistent dimensions") {
    TempDir dir("poolbad");
    testutil::write_file(dir.file("tokens.tsv"),
                         "w\t0\t1,2\n"
                         "w\t1\t1,2,3\n");
    CHECK_THROWS_AS(pool_tokens(dir.file("tokens.tsv")), FormatError);
}

TEST_CASE("pooling commutes with a fixed linear map") {
    TempDir dir("poolmap");
    testutil::write_file(dir.file("raw.tsv"),
                         "w\t0\t1,2\n"
                         "w\t1\t3,-1\n"
                         "w\t2\t0,4\n");
    Eigen::MatrixXd map(2, 2);
    map << 2, 1, -1, 3;
    auto raw = pool_tokens(dir.file("raw.tsv"));

    // Apply the map to each token vector, then pool.
    std::string mapped;
    std::vector<Eigen::VectorXd> tokens = {vec2(1, 2), vec2(3, -1), vec2(0, 4)};
    for (size_t i = 0; i < tokens.size(); ++i) {
        Eigen::VectorXd t = map * tokens[i];
        mapped += "w\t" + std::to_string(i) + "\t" + format_g9(t[0]) + "," +
                  format_g9(t[1]) + "\n";
    }
    testutil::write_file(dir.file("mapped.tsv"), mapped);
    auto pooled_mapped = pool_tokens(dir.file("mapped.tsv"));
    Eigen::VectorXd lhs = pooled_mapped.vector_of("w");
    Eigen::VectorXd rhs = map * raw.vector_of("w");
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}
