#include "dsm/reweight.hpp"

#include <cmath>

namespace dsm {

SparseCooccurrenceMatrix ppmi(const SparseCooccurrenceMatrix& m, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("ppmi alpha must lie in (0, 1]");
    if (!(m.grand_total > 0.0)) throw ConfigError("ppmi needs a non-empty matrix");

    double smoothed_total = 0.0;
    std::vector<double> smoothed_col(m.cols());
    for (size_t c = 0; c < m.cols(); ++c) {
        smoothed_col[c] = std::pow(m.col_marginals[c], alpha);
        smoothed_total += smoothed_col[c];
    }

    SparseCooccurrenceMatrix out;
    out.kind = m.kind;
    out.scheme = WeightScheme::Ppmi;
    out.meta = m.meta;
    out.meta["alpha"] = format_g9(alpha);
    out.row_labels = m.row_labels;
    out.col_labels = m.col_labels;
    out.col_ids = m.col_ids;
    out.entries.reserve(m.entries.size());
    const double total = m.grand_total;
    for (const auto& e : m.entries) {
        if (e.value <= 0.0) continue;
        double p_tc = e.value / total;
        double p_t = m.row_marginals[e.row] / total;
        double p_c = smoothed_col[e.col] / smoothed_total;
        double pmi = std::log2(p_tc / (p_t * p_c));
        if (pmi > 0.0) out.entries.push_back(CoocEntry{e.row, e.col, pmi});
    }
    out.recompute_marginals();
    return out;
}

SparseCooccurrenceMatrix log_entropy(const SparseCooccurrenceMatrix& m) {
    if (m.kind != ContextKind::Document) {
        throw ConfigError("log_entropy expects a document-context matrix");
    }
    const size_t num_docs = m.cols();
    SparseCooccurrenceMatrix out;
    out.kind = m.kind;
    out.scheme = WeightScheme::LogEntropy;
    out.meta = m.meta;
    out.row_labels = m.row_labels;
    out.col_labels = m.col_labels;
    out.col_ids = m.col_ids;

    std::vector<double> global(m.rows(), 1.0);
    if (num_docs <= 1) {
        out.meta["single_document"] = "1";
    } else {
        // H_norm per target from its distribution over documents.
        std::vector<double> entropy(m.rows(), 0.0);
        for (const auto& e : m.entries) {
            if (e.value <= 0.0) continue;
            double p = e.value / m.row_marginals[e.row];
            entropy[e.row] -= p * std::log(p);
        }
        const double log_d = std::log(static_cast<double>(num_docs));
        for (size_t r = 0; r < m.rows(); ++r) {
            global[r] = 1.0 - entropy[r] / log_d;
            // Snap rounding residue at H_norm = 1 so uniform words store
            // no explicit zeros.
            if (global[r] < 1e-12) global[r] = 0.0;
        }
    }
    out.entries.reserve(m.entries.size());
    for (const auto& e : m.entries) {
        if (e.value <= 0.0) continue;
        double w = std::log2(1.0 + e.value) * global[e.row];
        if (w > 0.0) out.entries.push_back(CoocEntry{e.row, e.col, w});
    }
    out.recompute_marginals();
    return out;
}

}  // namespace dsm
