#pragma once

// Representational Similarity Analysis: pairwise-cosine matrices over word
// samples, compared across spaces with Spearman correlation, plus the
// global / frequency-stratified / POS-stratified sampling schemes.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dsm/corpus.hpp"
#include "dsm/embedding.hpp"

namespace dsm {

struct Rsm {
    std::vector<std::string> words;
    Eigen::MatrixXd values;  // symmetric, unit diagonal, entries in [-1, 1]
    std::string space_id;
};

// Pairwise cosines over the wordlist; words absent from the space or with
// zero vectors are dropped with a warning. Fewer than 3 usable words is an
// error. Note: similarity (cosine) matrices, not dissimilarity ones.
Rsm build_rsm(const EmbeddingSpace& space, const std::vector<std::string>& wordlist,
              WarningList* warnings = nullptr);

// Spearman over the strict upper triangles; wordlists must match exactly.
double rsa_correlate(const Rsm& r1, const Rsm& r2);

std::vector<double> strict_upper_triangle(const Eigen::MatrixXd& m);

enum class SampleScheme : uint8_t { Global, FreqHigh, FreqMid, FreqLow, Pos };

std::string to_string(SampleScheme scheme);
SampleScheme sample_scheme_from_string(std::string_view s);

struct SamplePlan {
    SampleScheme scheme = SampleScheme::Global;
    int n_samples = 100;       // 100 global; 10 freq_mid/freq_low; 4 pos mid
    int sample_size = 1000;
    int64_t high_top = 1000;   // the high-frequency stratum: top-N words
    int64_t mid_min_freq = 500;  // mid stratum: freq > this, below the top-N
    int64_t low_min_freq = 100;  // low stratum: low_min <= freq <= mid_min
    double pos_majority = 0.9;   // POS scheme needs tagged vocabulary
    uint64_t seed = 0;

    static SamplePlan defaults(SampleScheme scheme);
};

struct WordSample {
    std::string label;  // e.g. "global-03", "noun-high", "verb-mid-1"
    std::vector<std::string> words;
};

// Draws pairwise-disjoint samples from the plan's stratum; deterministic
// given the seed. A stratum too small for the plan yields fewer or shorter
// samples with a warning.
std::vector<WordSample> sample_strata(const Vocabulary& vocab, const SamplePlan& plan,
                                      WarningList* warnings = nullptr);

struct RsaPairSummary {
    std::string space_a, space_b;
    double mean = 0.0, median = 0.0, sd = 0.0;
    std::vector<double> per_sample;
};

struct RsaReport {
    std::vector<std::string> space_ids;
    std::vector<std::string> sample_labels;
    std::vector<RsaPairSummary> pairs;  // upper-triangle order (a < b)

    const RsaPairSummary& pair(size_t a, size_t b) const;
};

// For every space pair and every sample: align wordlists by intersection,
// build both RSMs, correlate, and summarize with mean/median/sd.
RsaReport rsa_report(const std::vector<const EmbeddingSpace*>& spaces,
                     const std::vector<WordSample>& samples,
                     WarningList* warnings = nullptr);

// RSM file pair: <base>.words.tsv and <base>.rsm holding the packed
// little-endian float64 strict upper triangle, row-major.
void save_rsm(const Rsm& rsm, const std::string& base_path);
Rsm load_rsm(const std::string& base_path);

// Counts duplicate vectors in a space (the degenerate-embedding check).
size_t duplicate_vector_count(const EmbeddingSpace& space);

}  // namespace dsm
