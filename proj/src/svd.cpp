#include "dsm/svd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

namespace dsm {

RowMatrixXd sparse_multiply(const SparseCooccurrenceMatrix& m, const RowMatrixXd& x) {
    if (x.rows() != static_cast<Eigen::Index>(m.cols())) {
        throw ConfigError("sparse_multiply: shape mismatch");
    }
    RowMatrixXd y = RowMatrixXd::Zero(m.rows(), x.cols());
    for (const auto& e : m.entries) {
        y.row(e.row) += e.value * x.row(e.col);
    }
    return y;
}

RowMatrixXd sparse_multiply_transpose(const SparseCooccurrenceMatrix& m,
                                      const RowMatrixXd& x) {
    if (x.rows() != static_cast<Eigen::Index>(m.rows())) {
        throw ConfigError("sparse_multiply_transpose: shape mismatch");
    }
    RowMatrixXd y = RowMatrixXd::Zero(m.cols(), x.cols());
    for (const auto& e : m.entries) {
        y.row(e.col) += e.value * x.row(e.row);
    }
    return y;
}

namespace {

// Thin Q factor of a tall matrix.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace

SvdResult truncated_svd(const SparseCooccurrenceMatrix& m, int d, const SvdOptions& opts) {
    const Eigen::Index rows = static_cast<Eigen::Index>(m.rows());
    const Eigen::Index cols = static_cast<Eigen::Index>(m.cols());
    if (d < 1 || d > std::min(rows, cols)) {
        throw ConfigError("svd dimension must lie in [1, min(rows, cols)]");
    }
    const Eigen::Index sketch =
        std::min<Eigen::Index>(d + opts.oversample, std::min(rows, cols));

    // Range finder: Q spans the dominant column space of the input.
    std::mt19937_64 rng(mix64(opts.seed, 0x53564400ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    RowMatrixXd omega(cols, sketch);
    for (Eigen::Index i = 0; i < cols; ++i) {
        for (Eigen::Index j = 0; j < sketch; ++j) omega(i, j) = gauss(rng);
    }
    Eigen::MatrixXd q = orthonormalize(sparse_multiply(m, omega));
    for (int it = 0; it < opts.power_iterations; ++it) {
        Eigen::MatrixXd z = orthonormalize(sparse_multiply_transpose(m, q));
        q = orthonormalize(sparse_multiply(m, z));
    }

    // Project: B = Q^T A, factored through its (sketch x sketch) Gram matrix.
    RowMatrixXd bt = sparse_multiply_transpose(m, q);  // cols x sketch
    Eigen::MatrixXd gram = bt.transpose() * bt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw Error("svd: eigensolver failed");

    SvdResult result;
    result.U.resize(rows, d);
    result.S.resize(d);
    result.V = Eigen::MatrixXd::Zero(cols, d);

    // Eigenvalues arrive ascending; take the top d, clamped at zero.
    Eigen::VectorXd lambda = eig.eigenvalues();
    Eigen::MatrixXd u_hat = eig.eigenvectors();
    double lambda_max = std::max(lambda[sketch - 1], 0.0);
    double sigma_max = std::sqrt(lambda_max);
    double tol = sigma_max * static_cast<double>(std::max(rows, cols)) *
                 std::numeric_limits<double>::epsilon();
    int numerical_rank = 0;
    for (int j = 0; j < d; ++j) {
        Eigen::Index src = sketch - 1 - j;
        double sigma = std::sqrt(std::max(lambda[src], 0.0));
        result.S[j] = sigma;
        result.U.col(j) = q * u_hat.col(src);
        if (sigma > tol) {
            ++numerical_rank;
            result.V.col(j) = bt * u_hat.col(src) / sigma;
        }
        // Fix the sign so the largest-magnitude entry of U's column is
        // positive; SVD signs are otherwise arbitrary.
        Eigen::Index arg_max = 0;
        result.U.col(j).cwiseAbs().maxCoeff(&arg_max);
        if (result.U(arg_max, j) < 0.0) {
            result.U.col(j) = -result.U.col(j);
            result.V.col(j) = -result.V.col(j);
        }
    }
    if (numerical_rank < d) {
        result.warnings.push_back(
            "requested dimension " + std::to_string(d) + " exceeds numerical rank " +
            std::to_string(numerical_rank) + "; trailing columns span the null space");
    }
    return result;
}

EmbeddingSpace svd_embeddings(const SparseCooccurrenceMatrix& m, int d,
                              const SvdOptions& opts, WarningList* warnings) {
    SvdResult svd = truncated_svd(m, d, opts);
    if (warnings != nullptr) {
        warnings->insert(warnings->end(), svd.warnings.begin(), svd.warnings.end());
    }
    EmbeddingSpace space(m.row_labels, RowMatrixXd(svd.U));
    space.meta["method"] = "svd";
    space.meta["context"] = to_string(m.kind);
    space.meta["seed"] = std::to_string(opts.seed);
    std::string sv;
    for (int j = 0; j < d; ++j) {
        if (j > 0) sv += ',';
        sv += format_g9(svd.S[j]);
    }
    space.meta["singular_values"] = sv;
    return space;
}

}  // namespace dsm
