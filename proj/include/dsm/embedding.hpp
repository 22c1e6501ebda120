#pragma once

// Dense embedding spaces: storage, cosine queries, word2vec text I/O, and
// token-to-type pooling.

#include <Eigen/Core>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsm/common.hpp"

namespace dsm {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EmbeddingSpace {
    std::vector<std::string> words;
    std::unordered_map<std::string, uint32_t> index;
    RowMatrixXd vectors;  // |V| x dim
    std::map<std::string, std::string> meta;  // model id, context kind, provenance

    EmbeddingSpace() = default;
    EmbeddingSpace(std::vector<std::string> word_list, RowMatrixXd m);

    size_t size() const { return words.size(); }
    int dim() const { return static_cast<int>(vectors.cols()); }
    std::string model_id() const;

    std::optional<uint32_t> id_of(std::string_view word) const {
        auto it = index.find(std::string(word));
        return it == index.end() ? std::nullopt : std::optional<uint32_t>(it->second);
    }
    Eigen::VectorXd vector_of(std::string_view word) const;  // throws if absent

    // Cached L2 norms; zero-norm rows are permitted but flagged here.
    const std::vector<double>& norms() const;
    std::vector<uint32_t> zero_rows() const;

  private:
    mutable std::vector<double> norms_;
};

double cosine(const Eigen::Ref<const Eigen::VectorXd>& u,
              const Eigen::Ref<const Eigen::VectorXd>& v);

struct SimilarityQueryResult {
    std::string word;
    double score = 0.0;
    int rank = 0;
};

// Exact top-k cosine scan over the space minus `exclude`; zero vectors are
// never returned. Ties break lexicographically.
std::vector<SimilarityQueryResult> nearest(const EmbeddingSpace& space,
                                           const Eigen::Ref<const Eigen::VectorXd>& query,
                                           size_t k,
                                           const std::set<std::string>& exclude = {});

// word2vec text format: header "<V> <dim>", then "word v1 ... vdim" with 9
// significant digits. Round-trips bit-identically at that precision.
void export_text(const EmbeddingSpace& space, const std::string& path);
EmbeddingSpace import_text(const std::string& path);

// Token vector file: TSV "word<TAB>occurrence_id<TAB>v1,...,vd". Pooling
// averages each word's token vectors into one type vector; words keep file
// order of first appearance.
EmbeddingSpace pool_tokens(const std::string& token_vector_path,
                           WarningList* warnings = nullptr);

}  // namespace dsm
