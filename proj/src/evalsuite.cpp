#include "dsm/evalsuite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace dsm {

std::string to_string(Task task) {
    switch (task) {
        case Task::Synonymy: return "synonymy";
        case Task::Similarity: return "similarity";
        case Task::Relatedness: return "relatedness";
        case Task::Categorization: return "categorization";
        case Task::Analogy: return "analogy";
    }
    return "similarity";
}

Task task_from_string(std::string_view s) {
    if (s == "synonymy") return Task::Synonymy;
    if (s == "similarity") return Task::Similarity;
    if (s == "relatedness") return Task::Relatedness;
    if (s == "categorization") return Task::Categorization;
    if (s == "analogy") return Task::Analogy;
    throw FormatError("unknown task: " + std::string(s));
}

size_t BenchmarkDataset::size() const {
    return std::visit([](const auto& v) { return v.size(); }, items);
}

const std::vector<ChoiceItem>& BenchmarkDataset::choice_items() const {
    return std::get<std::vector<ChoiceItem>>(items);
}
const std::vector<RatingItem>& BenchmarkDataset::rating_items() const {
    return std::get<std::vector<RatingItem>>(items);
}
const std::vector<CategorizationItem>& BenchmarkDataset::categorization_items() const {
    return std::get<std::vector<CategorizationItem>>(items);
}
const std::vector<AnalogyItem>& BenchmarkDataset::analogy_items() const {
    return std::get<std::vector<AnalogyItem>>(items);
}

// ---------------------------------------------------------------------------
// Dataset I/O

BenchmarkDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line) || !starts_with(line, "#task=")) {
        throw FormatError(path + ": first line must be '#task=<task>[ name=<name>]'");
    }
    BenchmarkDataset ds;
    for (const auto& field : split(line.substr(1), ' ')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "task") ds.task = task_from_string(value);
        if (key == "name") ds.name = value;
    }
    if (ds.name.empty()) {
        auto slash = path.find_last_of('/');
        ds.name = slash == std::string::npos ? path : path.substr(slash + 1);
    }

    std::vector<ChoiceItem> choices;
    std::vector<RatingItem> ratings;
    std::vector<CategorizationItem> cats;
    std::vector<AnalogyItem> analogies;
    int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        auto fail = [&](const std::string& what) -> ParseError {
            return ParseError(path + ":" + std::to_string(line_no) + ": " + what);
        };
        switch (ds.task) {
            case Task::Synonymy: {
                if (fields.size() != 3) throw fail("expected target<TAB>options<TAB>answer");
                ChoiceItem item;
                item.target = lowercase(fields[0]);
                for (auto& opt : split(fields[1], '|')) {
                    item.options.push_back(lowercase(opt));
                }
                item.answer_index = std::stoi(fields[2]);
                if (item.answer_index < 0 ||
                    item.answer_index >= static_cast<int>(item.options.size())) {
                    throw fail("answer index out of range");
                }
                choices.push_back(std::move(item));
                break;
            }
            case Task::Similarity:
            case Task::Relatedness: {
                if (fields.size() != 3) throw fail("expected w1<TAB>w2<TAB>score");
                RatingItem item{lowercase(fields[0]), lowercase(fields[1]),
                                std::stod(fields[2])};
                if (!std::isfinite(item.gold)) throw fail("gold score must be finite");
                ratings.push_back(std::move(item));
                break;
            }
            case Task::Categorization: {
                if (fields.size() != 2) throw fail("expected word<TAB>class");
                cats.push_back(CategorizationItem{lowercase(fields[0]), fields[1]});
                break;
            }
            case Task::Analogy: {
                if (fields.size() != 4) throw fail("expected a<TAB>b<TAB>c<TAB>d");
                AnalogyItem item{lowercase(fields[0]), lowercase(fields[1]),
                                 lowercase(fields[2]), lowercase(fields[3])};
                if (item.a == item.b || item.a == item.c || item.a == item.d ||
                    item.b == item.c || item.b == item.d || item.c == item.d) {
                    throw fail("analogy words must be distinct");
                }
                analogies.push_back(std::move(item));
                break;
            }
        }
    }
    switch (ds.task) {
        case Task::Synonymy: ds.items = std::move(choices); break;
        case Task::Similarity:
        case Task::Relatedness: ds.items = std::move(ratings); break;
        case Task::Categorization: ds.items = std::move(cats); break;
        case Task::Analogy: ds.items = std::move(analogies); break;
    }
    return ds;
}

void save_dataset(const BenchmarkDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset file: " + path);
    out << "#task=" << to_string(ds.task) << " name=" << ds.name << '\n';
    switch (ds.task) {
        case Task::Synonymy:
            for (const auto& item : ds.choice_items()) {
                out << item.target << '\t';
                for (size_t i = 0; i < item.options.size(); ++i) {
                    if (i > 0) out << '|';
                    out << item.options[i];
                }
                out << '\t' << item.answer_index << '\n';
            }
            break;
        case Task::Similarity:
        case Task::Relatedness:
            for (const auto& item : ds.rating_items()) {
                out << item.w1 << '\t' << item.w2 << '\t' << format_g9(item.gold) << '\n';
            }
            break;
        case Task::Categorization:
            for (const auto& item : ds.categorization_items()) {
                out << item.word << '\t' << item.label << '\n';
            }
            break;
        case Task::Analogy:
            for (const auto& item : ds.analogy_items()) {
                out << item.a << '\t' << item.b << '\t' << item.c << '\t' << item.d << '\n';
            }
            break;
    }
}

// ---------------------------------------------------------------------------
// Spearman

namespace {

// Average ranks (1-based); ties share the mean of their rank run.
std::vector<double> average_ranks(const std::vector<double>& xs) {
    const size_t n = xs.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ConstantInputError("correlation undefined for a constant sequence");
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("spearman: length mismatch");
    if (xs.size() < 3) throw InsufficientDataError("spearman needs >= 3 pairs");
    auto rx = average_ranks(xs);
    auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

// ---------------------------------------------------------------------------
// K-means and purity

double purity(const std::vector<int>& cluster_assignment,
              const std::vector<int>& gold_labels, int num_clusters) {
    if (cluster_assignment.size() != gold_labels.size() || cluster_assignment.empty()) {
        throw ConfigError("purity: assignment/label size mismatch");
    }
    int num_classes = 0;
    for (int g : gold_labels) num_classes = std::max(num_classes, g + 1);
    std::vector<int64_t> table(static_cast<size_t>(num_clusters) * num_classes, 0);
    for (size_t i = 0; i < gold_labels.size(); ++i) {
        ++table[static_cast<size_t>(cluster_assignment[i]) * num_classes + gold_labels[i]];
    }
    int64_t majority_sum = 0;
    for (int r = 0; r < num_clusters; ++r) {
        int64_t best = 0;
        for (int c = 0; c < num_classes; ++c) {
            best = std::max(best, table[static_cast<size_t>(r) * num_classes + c]);
        }
        majority_sum += best;
    }
    return static_cast<double>(majority_sum) / static_cast<double>(gold_labels.size());
}

namespace {

double squared_distance(const RowMatrixXd& points, Eigen::Index i,
                        const RowMatrixXd& centers, Eigen::Index c) {
    return (points.row(i) - centers.row(c)).squaredNorm();
}

KmeansResult kmeans_once(const RowMatrixXd& points, int k, std::mt19937_64& rng,
                         int max_iterations) {
    const Eigen::Index n = points.rows();
    RowMatrixXd centers(k, points.cols());

    // k-means++ seeding.
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    Eigen::Index first = static_cast<Eigen::Index>(rng() % static_cast<uint64_t>(n));
    centers.row(0) = points.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points, i, centers, c - 1));
            total += d2[i];
        }
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double u = unit_double(rng()) * total;
            double cum = 0.0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += d2[i];
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng() % static_cast<uint64_t>(n));
        }
        centers.row(c) = points.row(pick);
    }

    std::vector<int> assignment(n, -1);
    std::vector<int64_t> counts(k, 0);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points, i, centers, 0);
            for (int c = 1; c < k; ++c) {
                double d = squared_distance(points, i, centers, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) ++counts[assignment[i]];
        // Re-seed empty clusters with the point farthest from its center.
        for (int c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (counts[assignment[i]] <= 1) continue;
                double d = squared_distance(points, i, centers, assignment[i]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --counts[assignment[far]];
            assignment[far] = c;
            counts[c] = 1;
            changed = true;
        }
        centers.setZero();
        for (Eigen::Index i = 0; i < n; ++i) centers.row(assignment[i]) += points.row(i);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);
        }
        if (!changed) break;
    }

    KmeansResult result;
    result.assignment = std::move(assignment);
    for (Eigen::Index i = 0; i < n; ++i) {
        result.wcss += squared_distance(points, i, centers, result.assignment[i]);
    }
    return result;
}

}  // namespace

KmeansResult kmeans(const RowMatrixXd& points, int k, int restarts, uint64_t seed,
                    int max_iterations) {
    if (k < 1 || k > points.rows()) throw ConfigError("kmeans: k must lie in [1, n]");
    if (restarts < 1) throw ConfigError("kmeans: restarts must be >= 1");
    KmeansResult best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(mix64(seed, 0x4b4d0000ULL, static_cast<uint64_t>(r)));
        KmeansResult candidate = kmeans_once(points, k, rng, max_iterations);
        if (candidate.wcss < best.wcss) best = std::move(candidate);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Evaluators

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cosine that degrades to -inf instead of throwing on zero vectors, for
// ranking: items that hit zero vectors score as misses.
double cosine_or_neg_inf(const EmbeddingSpace& space, uint32_t i,
                         const Eigen::Ref<const Eigen::VectorXd>& q, double qnorm) {
    double n = space.norms()[i];
    if (n == 0.0 || qnorm == 0.0) return kNegInf;
    return space.vectors.row(i).dot(q) / (n * qnorm);
}

}  // namespace

EvalResult eval_choice(const EmbeddingSpace& space, const BenchmarkDataset& ds) {
    if (ds.task != Task::Synonymy) throw ConfigError("eval_choice expects a synonymy dataset");
    const auto& items = ds.choice_items();
    int64_t covered = 0, correct = 0;
    for (const auto& item : items) {
        auto target = space.id_of(item.target);
        auto answer = space.id_of(item.options[item.answer_index]);
        if (!target || !answer) continue;
        ++covered;
        Eigen::VectorXd q = space.vectors.row(*target);
        double qnorm = q.norm();
        double answer_score = cosine_or_neg_inf(space, *answer, q, qnorm);
        if (answer_score == kNegInf) continue;  // zero vector: counts as a miss
        bool strictly_best = true;
        for (int oi = 0; oi < static_cast<int>(item.options.size()); ++oi) {
            if (oi == item.answer_index) continue;
            auto opt = space.id_of(item.options[oi]);
            if (!opt) continue;  // uncovered distractors drop out
            if (cosine_or_neg_inf(space, *opt, q, qnorm) >= answer_score) {
                strictly_best = false;  // ties count as incorrect
                break;
            }
        }
        if (strictly_best) ++correct;
    }
    if (covered == 0) throw CoverageError(ds.name + ": no covered items");
    return EvalResult{space.model_id(), ds.name, ds.task, "accuracy",
                      static_cast<double>(correct) / static_cast<double>(covered),
                      static_cast<double>(covered) / static_cast<double>(items.size())};
}

EvalResult eval_correlation(const EmbeddingSpace& space, const BenchmarkDataset& ds) {
    if (ds.task != Task::Similarity && ds.task != Task::Relatedness) {
        throw ConfigError("eval_correlation expects a similarity/relatedness dataset");
    }
    const auto& items = ds.rating_items();
    std::vector<double> cosines, golds;
    for (const auto& item : items) {
        auto w1 = space.id_of(item.w1);
        auto w2 = space.id_of(item.w2);
        if (!w1 || !w2) continue;
        if (space.norms()[*w1] == 0.0 || space.norms()[*w2] == 0.0) continue;
        cosines.push_back(cosine(space.vectors.row(*w1), space.vectors.row(*w2)));
        golds.push_back(item.gold);
    }
    if (cosines.size() < 3) {
        throw InsufficientDataError(ds.name + ": fewer than 3 covered pairs");
    }
    return EvalResult{space.model_id(), ds.name, ds.task, "spearman",
                      spearman(cosines, golds),
                      static_cast<double>(cosines.size()) /
                          static_cast<double>(items.size())};
}

EvalResult eval_categorization(const EmbeddingSpace& space, const BenchmarkDataset& ds,
                               int restarts, uint64_t seed, WarningList* warnings) {
    if (ds.task != Task::Categorization) {
        throw ConfigError("eval_categorization expects a categorization dataset");
    }
    const auto& items = ds.categorization_items();

    std::map<std::string, int> all_classes;
    for (const auto& item : items) all_classes.emplace(item.label, 0);

    std::vector<uint32_t> word_ids;
    std::vector<std::string> labels;
    for (const auto& item : items) {
        auto id = space.id_of(item.word);
        if (!id || space.norms()[*id] == 0.0) continue;
        word_ids.push_back(*id);
        labels.push_back(item.label);
    }
    if (word_ids.empty()) throw CoverageError(ds.name + ": no covered items");

    std::map<std::string, int> covered_classes;
    for (const auto& label : labels) {
        covered_classes.emplace(label, static_cast<int>(covered_classes.size()));
    }
    // Re-number in sorted order for determinism.
    {
        int next = 0;
        for (auto& [label, id] : covered_classes) id = next++;
    }
    if (covered_classes.size() < all_classes.size()) {
        warn(warnings, ds.name + ": " +
                           std::to_string(all_classes.size() - covered_classes.size()) +
                           " gold class(es) fully uncovered; k reduced to " +
                           std::to_string(covered_classes.size()));
    }
    int k = static_cast<int>(covered_classes.size());
    if (k > static_cast<int>(word_ids.size())) k = static_cast<int>(word_ids.size());

    // Length-normalize so Euclidean K-means follows cosine geometry.
    RowMatrixXd points(word_ids.size(), space.dim());
    for (size_t i = 0; i < word_ids.size(); ++i) {
        points.row(i) = space.vectors.row(word_ids[i]) / space.norms()[word_ids[i]];
    }
    KmeansResult clustering = kmeans(points, k, restarts, seed);
    std::vector<int> gold;
    gold.reserve(labels.size());
    for (const auto& label : labels) gold.push_back(covered_classes.at(label));

    return EvalResult{space.model_id(), ds.name, ds.task, "purity",
                      purity(clustering.assignment, gold, k),
                      static_cast<double>(word_ids.size()) /
                          static_cast<double>(items.size())};
}

EvalResult eval_analogy(const EmbeddingSpace& space, const BenchmarkDataset& ds) {
    if (ds.task != Task::Analogy) throw ConfigError("eval_analogy expects an analogy dataset");
    const auto& items = ds.analogy_items();
    int64_t covered = 0, correct = 0;
    for (const auto& item : items) {
        auto a = space.id_of(item.a);
        auto b = space.id_of(item.b);
        auto c = space.id_of(item.c);
        auto d = space.id_of(item.d);
        if (!a || !b || !c || !d) continue;
        ++covered;
        Eigen::VectorXd query = space.vectors.row(*c) + space.vectors.row(*b) -
                                space.vectors.row(*a);
        try {
            auto hits = nearest(space, query, 1, {item.a, item.b, item.c});
            if (!hits.empty() && hits.front().word == item.d) ++correct;
        } catch (const ZeroVectorError&) {
            // degenerate query: counts as a miss
        }
    }
    if (covered == 0) throw CoverageError(ds.name + ": no covered items");
    return EvalResult{space.model_id(), ds.name, ds.task, "accuracy",
                      static_cast<double>(correct) / static_cast<double>(covered),
                      static_cast<double>(covered) / static_cast<double>(items.size())};
}

EvalResult evaluate(const EmbeddingSpace& space, const BenchmarkDataset& ds,
                    int restarts, uint64_t seed, WarningList* warnings) {
    switch (ds.task) {
        case Task::Synonymy: return eval_choice(space, ds);
        case Task::Similarity:
        case Task::Relatedness: return eval_correlation(space, ds);
        case Task::Categorization:
            return eval_categorization(space, ds, restarts, seed, warnings);
        case Task::Analogy: return eval_analogy(space, ds);
    }
    throw ConfigError("unknown task");
}

}  // namespace dsm
