#include "dsm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dsm {

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> word_list, RowMatrixXd m)
    : words(std::move(word_list)), vectors(std::move(m)) {
    if (static_cast<Eigen::Index>(words.size()) != vectors.rows()) {
        throw FormatError("embedding space: word count disagrees with matrix rows");
    }
    if (!vectors.allFinite()) {
        throw FormatError("embedding space: vectors must have finite entries");
    }
    index.reserve(words.size());
    for (uint32_t i = 0; i < words.size(); ++i) {
        if (!index.emplace(words[i], i).second) {
            throw FormatError("embedding space: duplicate word '" + words[i] + "'");
        }
    }
}

std::string EmbeddingSpace::model_id() const {
    auto it = meta.find("model_id");
    return it != meta.end() ? it->second : "unnamed";
}

Eigen::VectorXd EmbeddingSpace::vector_of(std::string_view word) const {
    auto id = id_of(word);
    if (!id) throw Error("word not in space: " + std::string(word));
    return vectors.row(*id);
}

const std::vector<double>& EmbeddingSpace::norms() const {
    if (norms_.size() != static_cast<size_t>(vectors.rows())) {
        norms_.resize(vectors.rows());
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            norms_[i] = vectors.row(i).norm();
        }
    }
    return norms_;
}

std::vector<uint32_t> EmbeddingSpace::zero_rows() const {
    std::vector<uint32_t> out;
    const auto& n = norms();
    for (uint32_t i = 0; i < n.size(); ++i) {
        if (n[i] == 0.0) out.push_back(i);
    }
    return out;
}

double cosine(const Eigen::Ref<const Eigen::VectorXd>& u,
              const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (u.size() != v.size()) throw FormatError("cosine: dimension mismatch");
    double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0) {
        throw ZeroVectorError("cosine undefined for a zero vector");
    }
    return u.dot(v) / (nu * nv);
}

std::vector<SimilarityQueryResult> nearest(const EmbeddingSpace& space,
                                           const Eigen::Ref<const Eigen::VectorXd>& query,
                                           size_t k,
                                           const std::set<std::string>& exclude) {
    if (k < 1) throw ConfigError("nearest: k must be >= 1");
    if (query.size() != space.vectors.cols()) {
        throw FormatError("nearest: query dimension mismatch");
    }
    double qnorm = query.norm();
    if (qnorm == 0.0) throw ZeroVectorError("nearest: zero query vector");

    const auto& norms = space.norms();
    std::vector<std::pair<double, uint32_t>> scored;
    scored.reserve(space.size());
    Eigen::VectorXd scores = space.vectors * query;  // full scan
    for (uint32_t i = 0; i < space.size(); ++i) {
        if (norms[i] == 0.0) continue;
        if (!exclude.empty() && exclude.count(space.words[i]) > 0) continue;
        scored.emplace_back(scores[i] / (norms[i] * qnorm), i);
    }
    size_t kk = std::min(k, scored.size());
    auto better = [&](const std::pair<double, uint32_t>& a,
                      const std::pair<double, uint32_t>& b) {
        if (a.first != b.first) return a.first > b.first;
        return space.words[a.second] < space.words[b.second];
    };
    std::partial_sort(scored.begin(), scored.begin() + kk, scored.end(), better);
    std::vector<SimilarityQueryResult> out;
    out.reserve(kk);
    for (size_t r = 0; r < kk; ++r) {
        out.push_back(SimilarityQueryResult{space.words[scored[r].second],
                                            scored[r].first, static_cast<int>(r + 1)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// word2vec text format

void export_text(const EmbeddingSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write embeddings file: " + path);
    out << space.size() << ' ' << space.dim() << '\n';
    for (uint32_t i = 0; i < space.size(); ++i) {
        out << space.words[i];
        for (int j = 0; j < space.dim(); ++j) {
            out << ' ' << format_g9(space.vectors(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing embeddings file: " + path);
    // Provenance sidecar; the .vec file itself stays plain word2vec text.
    if (!space.meta.empty()) {
        std::ofstream meta(path + ".meta");
        for (const auto& [key, value] : space.meta) {
            if (key == "source") continue;
            meta << key << '=' << value << '\n';
        }
    }
}

EmbeddingSpace import_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embeddings file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty embeddings file");
    size_t count = 0;
    int dim = 0;
    {
        std::istringstream header(line);
        if (!(header >> count >> dim) || dim <= 0) {
            throw FormatError(path + ": bad header line '" + line + "'");
        }
    }
    std::vector<std::string> words;
    words.reserve(count);
    RowMatrixXd m(count, dim);
    size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= count) throw FormatError(path + ": more rows than header declares");
        std::istringstream iss(line);
        std::string word;
        iss >> word;
        for (int j = 0; j < dim; ++j) {
            if (!(iss >> m(row, j))) {
                throw FormatError(path + ": row for '" + word + "' has fewer than " +
                                  std::to_string(dim) + " values");
            }
        }
        double extra;
        if (iss >> extra) {
            throw FormatError(path + ": row for '" + word + "' has more than " +
                              std::to_string(dim) + " values");
        }
        words.push_back(std::move(word));
        ++row;
    }
    if (row != count) {
        throw FormatError(path + ": header declares " + std::to_string(count) +
                          " rows, file has " + std::to_string(row));
    }
    EmbeddingSpace space(std::move(words), std::move(m));
    space.meta["source"] = path;
    std::ifstream meta(path + ".meta");
    if (meta) {
        while (std::getline(meta, line)) {
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                space.meta[line.substr(0, eq)] = line.substr(eq + 1);
            }
        }
    }
    return space;
}

// ---------------------------------------------------------------------------
// Token pooling (Eq: type vector = mean of the word's token vectors)

EmbeddingSpace pool_tokens(const std::string& token_vector_path,
                           WarningList* warnings) {
    std::ifstream in(token_vector_path);
    if (!in) throw Error("cannot open token vector file: " + token_vector_path);

    std::vector<std::string> words;
    std::unordered_map<std::string, uint32_t> index;
    std::vector<Eigen::VectorXd> sums;
    std::vector<int64_t> counts;
    int dim = -1;

    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw FormatError(token_vector_path + ": expected word<TAB>occ<TAB>values at line " +
                              std::to_string(line_no));
        }
        auto values = split(fields[2], ',');
        if (dim < 0) dim = static_cast<int>(values.size());
        if (static_cast<int>(values.size()) != dim) {
            throw FormatError(token_vector_path + ": inconsistent vector dimension at line " +
                              std::to_string(line_no));
        }
        auto [it, inserted] = index.emplace(fields[0], static_cast<uint32_t>(words.size()));
        if (inserted) {
            words.push_back(fields[0]);
            sums.emplace_back(Eigen::VectorXd::Zero(dim));
            counts.push_back(0);
        }
        Eigen::VectorXd& acc = sums[it->second];
        for (int j = 0; j < dim; ++j) acc[j] += std::stod(values[j]);
        ++counts[it->second];
    }
    if (words.empty()) throw EmptyInputError(token_vector_path + ": no token vectors");

    RowMatrixXd m(words.size(), dim);
    size_t zero_count = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        m.row(i) = sums[i] / static_cast<double>(counts[i]);
        if (m.row(i).norm() == 0.0) {
            ++zero_count;
            warn(warnings, "pooled type vector for '" + words[i] + "' is all zeros");
        }
    }
    EmbeddingSpace space(std::move(words), std::move(m));
    space.meta["pooling"] = "token_mean";
    if (zero_count > 0) space.meta["zero_rows"] = std::to_string(zero_count);
    return space;
}

}  // namespace dsm
