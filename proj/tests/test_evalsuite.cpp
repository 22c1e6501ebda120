#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "dsm/evalsuite.hpp"
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

// Brute-force Spearman oracle: explicit average ranks, then Pearson.
double spearman_oracle(std::vector<double> xs, std::vector<double> ys) {
    auto rank_of = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            double below = 0.0, equal = 0.0;
            for (size_t j = 0; j < v.size(); ++j) {
                if (v[j] < v[i]) below += 1.0;
                if (v[j] == v[i]) equal += 1.0;
            }
            r[i] = below + (equal + 1.0) / 2.0;
        }
        return r;
    };
    auto rx = rank_of(xs), ry = rank_of(ys);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

Eigen::MatrixXd random_orthogonal(int dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ();
}

}  // namespace

TEST_CASE("spearman equals 1 on identical and -1 on reversed sequences") {
    std::vector<double> xs = {0.1, 0.7, 0.3, 0.9, 0.5};
    CHECK(spearman(xs, xs) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> rev(xs.rbegin(), xs.rend());
    std::vector<double> increasing = {1, 2, 3, 4, 5};
    std::vector<double> decreasing = {5, 4, 3, 2, 1};
    CHECK(spearman(increasing, decreasing) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("spearman handles ties with average ranks") {
    std::vector<double> xs = {1, 2, 2, 3};
    std::vector<double> ys = {1, 3, 2, 4};
    CHECK(spearman(xs, ys) == doctest::Approx(spearman_oracle(xs, ys)).epsilon(1e-12));
}

TEST_CASE("spearman matches the oracle on random tied data") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 3 + rng() % 40;
        std::vector<double> xs(n), ys(n);
        for (size_t i = 0; i < n; ++i) {
            xs[i] = static_cast<double>(rng() % 8);  // heavy ties
            ys[i] = static_cast<double>(rng() % 8);
        }
        bool xs_const = std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; });
        bool ys_const = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; });
        if (xs_const || ys_const) continue;
        CHECK(spearman(xs, ys) == doctest::Approx(spearman_oracle(xs, ys)).epsilon(1e-12));
    }
}

TEST_CASE("spearman signals constant input distinctly") {
    std::vector<double> xs = {1, 1, 1, 1};
    std::vector<double> ys = {1, 2, 3, 4};
    CHECK_THROWS_AS(spearman(xs, ys), ConstantInputError);
    CHECK_THROWS_AS(spearman({1, 2}, {2, 1}), InsufficientDataError);
}

TEST_CASE("purity of perfect clusters is 1 and follows the majority formula") {
    CHECK(purity({0, 0, 1, 1}, {1, 1, 0, 0}, 2) == doctest::Approx(1.0));
    // 10 items, two clusters with majority counts 5 and 3 -> 0.8.
    std::vector<int> assignment = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    std::vector<int> gold = {0, 0, 0, 0, 0, 1, 1, 1, 1, 0};
    CHECK(purity(assignment, gold, 2) == doctest::Approx(0.8));
}

TEST_CASE("purity matches a brute-force contingency oracle on random data") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 5 + static_cast<int>(rng() % 60);
        int k = 1 + static_cast<int>(rng() % 6);
        int classes = 1 + static_cast<int>(rng() % 6);
        std::vector<int> assignment(n), gold(n);
        for (int i = 0; i < n; ++i) {
            assignment[i] = static_cast<int>(rng() % k);
            gold[i] = static_cast<int>(rng() % classes);
        }
        double majority_total = 0.0;
        for (int r = 0; r < k; ++r) {
            int best = 0;
            for (int c = 0; c < classes; ++c) {
                int count = 0;
                for (int i = 0; i < n; ++i) {
                    if (assignment[i] == r && gold[i] == c) ++count;
                }
                best = std::max(best, count);
            }
            majority_total += best;
        }
        CHECK(purity(assignment, gold, k) == doctest::Approx(majority_total / n).epsilon(1e-15));
    }
}

TEST_CASE("kmeans separates well-separated blobs deterministically") {
    std::mt19937_64 rng(300);
    std::normal_distribution<double> noise(0.0, 0.05);
    RowMatrixXd points(30, 2);
    for (int i = 0; i < 30; ++i) {
        double cx = i < 15 ? 0.0 : 10.0;
        points(i, 0) = cx + noise(rng);
        points(i, 1) = noise(rng);
    }
    auto a = kmeans(points, 2, 5, 77);
    auto b = kmeans(points, 2, 5, 77);
    CHECK(a.assignment == b.assignment);
    CHECK(a.wcss == b.wcss);
    for (int i = 1; i < 15; ++i) CHECK(a.assignment[i] == a.assignment[0]);
    for (int i = 16; i < 30; ++i) CHECK(a.assignment[i] == a.assignment[15]);
    CHECK(a.assignment[0] != a.assignment[15]);
}

TEST_CASE("eval_choice scores 1 when the answer vector equals the target") {
    auto space = make_space({"t", "right", "wrong1", "wrong2"},
                            {{1, 0}, {1, 0}, {0, 1}, {-1, 0}});
    BenchmarkDataset ds;
    ds.name = "toy-choice";
    ds.task = Task::Synonymy;
    ds.items = std::vector<ChoiceItem>{{"t", {"right", "wrong1", "wrong2"}, 0}};
    auto result = eval_choice(space, ds);
    CHECK(result.score == doctest::Approx(1.0));
    CHECK(result.coverage == doctest::Approx(1.0));
    CHECK(result.metric == "accuracy");
}

TEST_CASE("eval_choice matches brute-force scoring on a toy set") {
    auto space = make_space({"t1", "t2", "a", "b", "c"},
                            {{1, 0.2}, {0.1, 1}, {0.9, 0}, {0, 1}, {0.5, 0.5}});
    BenchmarkDataset ds;
    ds.name = "toy2";
    ds.task = Task::Synonymy;
    ds.items = std::vector<ChoiceItem>{
        {"t1", {"a", "b", "c"}, 0},   // cos(t1,a) highest -> correct
        {"t2", {"a", "b", "c"}, 2},   // cos(t2,b) highest, answer is c -> wrong
    };
    auto result = eval_choice(space, ds);
    CHECK(result.score == doctest::Approx(0.5));
}

TEST_CASE("choice ties count as incorrect") {
    auto space = make_space({"t", "x", "y"}, {{1, 0}, {2, 0}, {3, 0}});
    BenchmarkDataset ds;
    ds.name = "ties";
    ds.task = Task::Synonymy;
    ds.items = std::vector<ChoiceItem>{{"t", {"x", "y"}, 0}};  // both cos = 1
    CHECK(eval_choice(space, ds).score == doctest::Approx(0.0));
}

TEST_CASE("uncovered choice items raise a coverage error only when all are missing") {
    auto space = make_space({"t", "a"}, {{1, 0}, {0, 1}});
    BenchmarkDataset ds;
    ds.name = "missing";
    ds.task = Task::Synonymy;
    ds.items = std::vector<ChoiceItem>{{"nope", {"a"}, 0}};
    CHECK_THROWS_AS(eval_choice(space, ds), CoverageError);
}

TEST_CASE("eval_correlation reaches +-1 on monotone gold ratings") {
    auto space = make_space({"a", "b", "c", "d"},
                            {{1, 0}, {0.8, 0.6}, {0.2, 0.98}, {-0.5, 0.87}});
    std::vector<RatingItem> pairs;
    std::vector<std::string> words = {"a", "b", "c", "d"};
    for (size_t i = 0; i < words.size(); ++i) {
        for (size_t j = i + 1; j < words.size(); ++j) {
            double cos = cosine(space.vector_of(words[i]), space.vector_of(words[j]));
            pairs.push_back(RatingItem{words[i], words[j], cos});
        }
    }
    BenchmarkDataset ds;
    ds.name = "mono";
    ds.task = Task::Similarity;
    ds.items = pairs;
    CHECK(eval_correlation(space, ds).score == doctest::Approx(1.0).epsilon(1e-12));

    for (auto& p : pairs) p.gold = -p.gold;
    ds.items = pairs;
    CHECK(eval_correlation(space, ds).score == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eval_correlation needs at least 3 covered pairs") {
    auto space = make_space({"a", "b"}, {{1, 0}, {0, 1}});
    BenchmarkDataset ds;
    ds.name = "thin";
    ds.task = Task::Relatedness;
    ds.items = std::vector<RatingItem>{{"a", "b", 0.5}, {"a", "gone", 0.1}};
    CHECK_THROWS_AS(eval_correlation(space, ds), InsufficientDataError);
}

TEST_CASE("eval_categorization reaches purity 1 on separable classes") {
    std::vector<std::string> words;
    std::vector<std::vector<double>> rows;
    std::vector<CategorizationItem> items;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (int i = 0; i < 10; ++i) {
        words.push_back("animal" + std::to_string(i));
        rows.push_back({1.0 + noise(rng), noise(rng)});
        items.push_back({words.back(), "animal"});
        words.push_back("tool" + std::to_string(i));
        rows.push_back({noise(rng), 1.0 + noise(rng)});
        items.push_back({words.back(), "tool"});
    }
    auto space = make_space(words, rows);
    BenchmarkDataset ds;
    ds.name = "cats";
    ds.task = Task::Categorization;
    ds.items = items;
    auto result = eval_categorization(space, ds, 10, 5);
    CHECK(result.score == doctest::Approx(1.0));
    CHECK(result.metric == "purity");
}

TEST_CASE("fully uncovered gold classes reduce k with a warning") {
    auto space = make_space({"a", "b", "c"}, {{1, 0}, {0.9, 0.1}, {0, 1}});
    BenchmarkDataset ds;
    ds.name = "partial";
    ds.task = Task::Categorization;
    ds.items = std::vector<CategorizationItem>{
        {"a", "x"}, {"b", "x"}, {"c", "y"}, {"missing1", "z"}, {"missing2", "z"}};
    WarningList warnings;
    auto result = eval_categorization(space, ds, 5, 1, &warnings);
    REQUIRE_FALSE(warnings.empty());
    CHECK(warnings[0].find("k reduced") != std::string::npos);
    CHECK(result.coverage == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("eval_analogy solves exact parallelograms and never returns a, b, or c") {
    // d = c + b - a exactly; distractor far away.
    auto space = make_space({"a", "b", "c", "d", "far"},
                            {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {-5, -5, 5}});
    BenchmarkDataset ds;
    ds.name = "para";
    ds.task = Task::Analogy;
    ds.items = std::vector<AnalogyItem>{{"a", "b", "c", "d"}};
    auto result = eval_analogy(space, ds);
    CHECK(result.score == doctest::Approx(1.0));

    // Candidate set restricted to {a, b, c, d}: a, b, c are excluded even
    // when their cosine to the query would win.
    auto tight = make_space({"a", "b", "c", "d"},
                            {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {-1, -1, -1}});
    BenchmarkDataset ds2;
    ds2.name = "para2";
    ds2.task = Task::Analogy;
    ds2.items = std::vector<AnalogyItem>{{"a", "b", "c", "d"}};
    auto r2 = eval_analogy(tight, ds2);
    // d is the only candidate left; prediction must be d.
    CHECK(r2.score == doctest::Approx(1.0));
}

TEST_CASE("eval_analogy agrees with a brute-force argmax oracle") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> gauss;
    std::vector<std::string> words = {"p", "q", "r", "s", "t"};
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < words.size(); ++i) {
        rows.push_back({gauss(rng), gauss(rng), gauss(rng)});
    }
    auto space = make_space(words, rows);
    BenchmarkDataset ds;
    ds.name = "brute";
    ds.task = Task::Analogy;
    ds.items = std::vector<AnalogyItem>{{"p", "q", "r", "s"}, {"q", "r", "s", "t"}};

    int correct = 0;
    for (const auto& item : ds.analogy_items()) {
        Eigen::VectorXd query = space.vector_of(item.c) + space.vector_of(item.b) -
                                space.vector_of(item.a);
        std::string best;
        double best_score = -2.0;
        for (const auto& w : words) {
            if (w == item.a || w == item.b || w == item.c) continue;
            double score = cosine(space.vector_of(w), query);
            if (score > best_score) {
                best_score = score;
                best = w;
            }
        }
        if (best == item.d) ++correct;
    }
    auto result = eval_analogy(space, ds);
    CHECK(result.score == doctest::Approx(correct / 2.0));
}

TEST_CASE("analogy items missing any word are skipped and tracked in coverage") {
    auto space = make_space({"a", "b", "c", "d"},
                            {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    BenchmarkDataset ds;
    ds.name = "skip";
    ds.task = Task::Analogy;
    ds.items = std::vector<AnalogyItem>{{"a", "b", "c", "d"}, {"a", "b", "gone", "d"}};
    auto result = eval_analogy(space, ds);
    CHECK(result.coverage == doctest::Approx(0.5));
    CHECK(result.score == doctest::Approx(1.0));  // over covered items only
}

TEST_CASE("all evaluators are invariant under a global orthogonal transform") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    const int n = 12, dim = 5;
    std::vector<std::string> words;
    RowMatrixXd m(n, dim);
    for (int i = 0; i < n; ++i) {
        words.push_back("w" + std::to_string(i));
        for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
    }
    EmbeddingSpace space(words, m);
    Eigen::MatrixXd rot = random_orthogonal(dim, 52);
    EmbeddingSpace rotated(words, RowMatrixXd(m * rot.transpose()));

    BenchmarkDataset choice;
    choice.name = "c";
    choice.task = Task::Synonymy;
    choice.items = std::vector<ChoiceItem>{{"w0", {"w1", "w2", "w3"}, 1},
                                           {"w4", {"w5", "w6"}, 0}};
    CHECK(eval_choice(space, choice).score == eval_choice(rotated, choice).score);

    BenchmarkDataset rating;
    rating.name = "r";
    rating.task = Task::Similarity;
    rating.items = std::vector<RatingItem>{
        {"w0", "w1", 0.9}, {"w2", "w3", 0.4}, {"w4", "w5", 0.1}, {"w6", "w7", 0.7}};
    CHECK(eval_correlation(space, rating).score ==
          doctest::Approx(eval_correlation(rotated, rating).score).epsilon(1e-12));

    BenchmarkDataset cats;
    cats.name = "k";
    cats.task = Task::Categorization;
    cats.items = std::vector<CategorizationItem>{{"w0", "x"}, {"w1", "x"}, {"w2", "x"},
                                                 {"w3", "y"}, {"w4", "y"}, {"w5", "y"}};
    // Length-normalized clustering preserves pairwise distances under
    // rotation, so purity agrees restart by restart.
    CHECK(eval_categorization(space, cats, 4, 9).score ==
          doctest::Approx(eval_categorization(rotated, cats, 4, 9).score));

    BenchmarkDataset analogy;
    analogy.name = "a";
    analogy.task = Task::Analogy;
    analogy.items = std::vector<AnalogyItem>{{"w0", "w1", "w2", "w3"},
                                             {"w4", "w5", "w6", "w7"}};
    CHECK(eval_analogy(space, analogy).score == eval_analogy(rotated, analogy).score);
}

TEST_CASE("coverage equals a brute-force membership scan") {
    auto space = make_space({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 1}});
    BenchmarkDataset ds;
    ds.name = "cov";
    ds.task = Task::Analogy;
    ds.items = std::vector<AnalogyItem>{
        {"a", "b", "c", "zz"}, {"a", "b", "zz", "c"}, {"b", "c", "a", "zz"}};
    // Every item has exactly one missing word.
    bool threw = false;
    try {
        eval_analogy(space, ds);
    } catch (const CoverageError&) {
        threw = true;
    }
    CHECK(threw);

    ds.items = std::vector<AnalogyItem>{{"a", "b", "c", "zz"}};
    std::vector<AnalogyItem> items = ds.analogy_items();
    int brute_covered = 0;
    for (const auto& item : items) {
        if (space.id_of(item.a) && space.id_of(item.b) && space.id_of(item.c) &&
            space.id_of(item.d)) {
            ++brute_covered;
        }
    }
    CHECK(brute_covered == 0);
}

TEST_CASE("dataset files round-trip through save and load") {
    TempDir dir("dataset");
    BenchmarkDataset ds;
    ds.name = "sample";
    ds.task = Task::Analogy;
    ds.items = std::vector<AnalogyItem>{{"king", "queen", "man", "woman"}};
    save_dataset(ds, dir.file("a.tsv"));
    auto loaded = load_dataset(dir.file("a.tsv"));
    CHECK(loaded.name == "sample");
    CHECK(loaded.task == Task::Analogy);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded.analogy_items()[0].d == "woman");

    BenchmarkDataset ch;
    ch.name = "choices";
    ch.task = Task::Synonymy;
    ch.items = std::vector<ChoiceItem>{{"big", {"large", "tiny"}, 0}};
    save_dataset(ch, dir.file("c.tsv"));
    auto loaded_ch = load_dataset(dir.file("c.tsv"));
    CHECK(loaded_ch.choice_items()[0].options.size() == 2);
    CHECK(loaded_ch.choice_items()[0].answer_index == 0);
}
