#pragma once

// Random Indexing: incremental embeddings accumulated from sparse ternary
// index vectors, with an optional order-encoding permutation variant and a
// dynamic frequency-damping weight.

#include <cstdint>
#include <vector>

#include "dsm/corpus.hpp"
#include "dsm/embedding.hpp"

namespace dsm {

struct SparseTernaryVector {
    std::vector<uint32_t> plus;   // positions holding +1
    std::vector<uint32_t> minus;  // positions holding -1
};

struct IndexVectorSet {
    int dim = 2000;
    int delta = 10;  // nonzeros per vector, half of each sign
    uint64_t seed = 0;
    std::vector<SparseTernaryVector> vectors;  // one per vocabulary id
    std::vector<uint32_t> perm_left;           // permutation of 0..dim-1
    std::vector<uint32_t> perm_right;          // its inverse

    Eigen::VectorXd dense(WordId id) const;
};

// Index vectors are a pure function of (seed, word id): regenerating the set
// for the same vocabulary size reproduces it exactly.
IndexVectorSet make_index_vectors(const Vocabulary& vocab, int dim, int delta,
                                  uint64_t seed);

struct RiConfig {
    int window_radius = 2;
    bool permute = false;
    bool dynamic_weighting = false;
    double weighting_theta = 10000.0;  // w(c) = exp(-f_seen(c)/theta)
};

// Streams the corpus once, adding each in-window neighbor's (optionally
// permuted, optionally damped) index vector to the target row. Without
// dynamic weighting the result equals the window count matrix multiplied
// into the index vectors.
EmbeddingSpace train_ri(SentenceReader& stream, const Vocabulary& vocab,
                        const IndexVectorSet& idx, const RiConfig& cfg);

}  // namespace dsm
