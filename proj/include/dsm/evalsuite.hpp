#pragma once

// Intrinsic task battery: synonymy choice, similarity/relatedness rating
// correlation, K-means categorization with purity, and offset-method
// analogy completion.

#include <string>
#include <variant>
#include <vector>

#include "dsm/embedding.hpp"

namespace dsm {

enum class Task : uint8_t { Synonymy, Similarity, Relatedness, Categorization, Analogy };

std::string to_string(Task task);
Task task_from_string(std::string_view s);

struct ChoiceItem {
    std::string target;
    std::vector<std::string> options;
    int answer_index = 0;
};
struct RatingItem {
    std::string w1, w2;
    double gold = 0.0;
};
struct CategorizationItem {
    std::string word;
    std::string label;
};
struct AnalogyItem {
    std::string a, b, c, d;
};

struct BenchmarkDataset {
    std::string name;
    Task task = Task::Similarity;
    std::variant<std::vector<ChoiceItem>, std::vector<RatingItem>,
                 std::vector<CategorizationItem>, std::vector<AnalogyItem>>
        items;

    size_t size() const;
    const std::vector<ChoiceItem>& choice_items() const;
    const std::vector<RatingItem>& rating_items() const;
    const std::vector<CategorizationItem>& categorization_items() const;
    const std::vector<AnalogyItem>& analogy_items() const;
};

// Dataset TSV with a "#task=<task>[ name=<name>]" header line. Schemas:
//   choice          target<TAB>opt1|opt2|...<TAB>answer_index
//   rating          w1<TAB>w2<TAB>score
//   categorization  word<TAB>class
//   analogy         a<TAB>b<TAB>c<TAB>d
BenchmarkDataset load_dataset(const std::string& path);
void save_dataset(const BenchmarkDataset& ds, const std::string& path);

struct EvalResult {
    std::string model_id;
    std::string dataset;
    Task task = Task::Similarity;
    std::string metric;  // accuracy | spearman | purity
    double score = 0.0;
    double coverage = 0.0;  // fraction of items with all words in vocab
};

// Spearman rank correlation with average ranks for ties; throws
// ConstantInputError when either sequence is constant.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Purity (fraction of items in their cluster's majority gold class).
double purity(const std::vector<int>& cluster_assignment,
              const std::vector<int>& gold_labels, int num_clusters);

struct KmeansResult {
    std::vector<int> assignment;
    double wcss = 0.0;  // within-cluster sum of squared distances
};

// Seeded k-means++ with restarts; keeps the restart with the lowest WCSS.
KmeansResult kmeans(const RowMatrixXd& points, int k, int restarts, uint64_t seed,
                    int max_iterations = 300);

// A choice item counts as covered when its target and answer are in the
// space; uncovered distractors are dropped from the comparison. Ties for
// the top cosine count as incorrect.
EvalResult eval_choice(const EmbeddingSpace& space, const BenchmarkDataset& ds);

// Spearman between pair cosines and gold ratings over covered pairs.
EvalResult eval_correlation(const EmbeddingSpace& space, const BenchmarkDataset& ds);

// K-means (k = number of covered gold classes) on length-normalized
// vectors, scored with purity.
EvalResult eval_categorization(const EmbeddingSpace& space, const BenchmarkDataset& ds,
                               int restarts = 10, uint64_t seed = 0,
                               WarningList* warnings = nullptr);

// Offset method: argmax_{t not in {a,b,c}} cos(t, c + b - a); an item is
// covered when all four words are in the space.
EvalResult eval_analogy(const EmbeddingSpace& space, const BenchmarkDataset& ds);

EvalResult evaluate(const EmbeddingSpace& space, const BenchmarkDataset& ds,
                    int restarts = 10, uint64_t seed = 0,
                    WarningList* warnings = nullptr);

}  // namespace dsm
