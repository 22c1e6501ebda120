#pragma once

// Non-parametric statistics over the results ledger: score-to-rank
// conversion, Kruskal-Wallis, Dunn's pairwise tests with Bonferroni
// correction, the Wilcoxon signed-rank test, cross-dataset correlations,
// and the best-model report.

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "dsm/ledger.hpp"

namespace dsm {

struct RankTable {
    // dataset -> model -> rank (1 = best score; ties get average ranks)
    std::map<std::string, std::map<std::string, double>> ranks;
    std::map<std::string, int> n_models;
};

// Missing (dataset, model) cells stay absent and do not count toward that
// dataset's n. Ranks are invariant under monotone transforms of scores.
RankTable rank_scores(const Ledger& ledger);

enum class Correction : uint8_t { None, Bonferroni };

struct TestReport {
    std::string statistic_name;  // "H", "z", or "V"
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    Correction correction = Correction::None;
    std::string grouping;

    struct Pairwise {
        int group_a = 0, group_b = 0;
        double z = 0.0;
        double p_raw = 1.0;
        double p_adjusted = 1.0;
    };
    std::vector<Pairwise> pairwise;  // Dunn tests only
};

// Kruskal-Wallis H with tie correction; p from the chi-square upper tail.
// Fully tied data yields H = 0, p = 1.
TestReport kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Dunn's pairwise z tests on mean ranks, two-sided, with optional
// Bonferroni correction over g(g-1)/2 comparisons. Empty groups are
// excluded with a warning (group indices refer to the input order).
TestReport dunn_test(const std::vector<std::vector<double>>& groups,
                     Correction correction = Correction::Bonferroni,
                     WarningList* warnings = nullptr);

// V = sum of ranks of positive differences (xs - ys); zero differences are
// dropped. Exact enumeration for n <= 25, normal approximation with tie
// correction above.
TestReport wilcoxon_signed_rank(const std::vector<double>& xs,
                                const std::vector<double>& ys);

struct DatasetCorrelation {
    std::vector<std::string> datasets;
    Eigen::MatrixXd rho;  // NaN where fewer than 3 models are shared
};

DatasetCorrelation dataset_correlation(const Ledger& ledger);

struct BestRow {
    std::string dataset;
    double score = 0.0;
    std::vector<std::string> models;  // ties listed jointly
};

std::vector<BestRow> best_report(const Ledger& ledger);

// Average ranks (1-based) with ties sharing their mean rank; ascending by
// value. Shared by the tests and exposed for the oracle checks.
std::vector<double> rank_with_ties(const std::vector<double>& values);

}  // namespace dsm
