#pragma once

// Seeded randomized truncated SVD over sparse co-occurrence matrices.
// Only matrix-vector products against the sparse input are used; dense
// work touches the (d + oversample)-sized sketch.

#include <Eigen/Core>

#include "dsm/cooccur.hpp"
#include "dsm/embedding.hpp"

namespace dsm {

struct SvdOptions {
    int power_iterations = 4;
    int oversample = 10;
    uint64_t seed = 0;
};

struct SvdResult {
    Eigen::MatrixXd U;       // rows x d, orthonormal columns
    Eigen::VectorXd S;       // d singular values, non-increasing
    Eigen::MatrixXd V;       // cols x d; columns beyond the numerical rank
                             // are zeroed (arbitrary within the null space)
    WarningList warnings;
};

// Rank-d factorization m ~= U S V^T. Deterministic given options.seed; the
// sign of each left singular vector is fixed so its largest-magnitude entry
// is positive.
SvdResult truncated_svd(const SparseCooccurrenceMatrix& m, int d,
                        const SvdOptions& opts = {});

// Embeddings are the rows of U (the singular value matrix is discarded);
// singular values are recorded in the space metadata.
EmbeddingSpace svd_embeddings(const SparseCooccurrenceMatrix& m, int d,
                              const SvdOptions& opts = {},
                              WarningList* warnings = nullptr);

// Sparse-times-dense helpers shared with the Random Indexing oracle tests.
RowMatrixXd sparse_multiply(const SparseCooccurrenceMatrix& m,
                            const RowMatrixXd& x);           // (rows x k)
RowMatrixXd sparse_multiply_transpose(const SparseCooccurrenceMatrix& m,
                                      const RowMatrixXd& x); // (cols x k)

}  // namespace dsm
