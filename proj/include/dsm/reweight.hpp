#pragma once

// Association weighting of raw co-occurrence counts: smoothed PPMI and
// log-entropy (the LSA weighting).

#include "dsm/cooccur.hpp"

namespace dsm {

// Positive PMI with context-distribution smoothing:
//   ppmi(t,c) = max(0, log2( p(t,c) / (p(t) * p_a(c)) ))
// with p_a(c) = count(c)^alpha / sum_c' count(c')^alpha. The exponent is
// applied to the context marginal only. Zeros are not stored.
SparseCooccurrenceMatrix ppmi(const SparseCooccurrenceMatrix& m, double alpha = 0.75);

// Log-entropy weighting for document-context matrices:
//   w(t,d) = log2(1 + tf(t,d)) * (1 - H_norm(t))
// where H_norm(t) = -sum_d P(d|t) log P(d|t) / log |D|. A single-document
// corpus fixes the global weight at 1 and flags the output.
SparseCooccurrenceMatrix log_entropy(const SparseCooccurrenceMatrix& m);

}  // namespace dsm
