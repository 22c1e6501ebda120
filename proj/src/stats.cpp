#include "dsm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsm/special.hpp"

namespace dsm {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> rank_with_ties(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

// Sum of t^3 - t over tie runs of the pooled sample.
double tie_term(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    double total = 0.0;
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        total += t * t * t - t;
        i = j + 1;
    }
    return total;
}

}  // namespace

RankTable rank_scores(const Ledger& ledger) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> by_dataset;
    for (const auto& record : ledger) {
        if (!record.ok() || !std::isfinite(record.score)) continue;
        by_dataset[record.dataset].emplace_back(record.model, record.score);
    }
    RankTable table;
    for (auto& [dataset, cells] : by_dataset) {
        std::vector<double> neg_scores;
        neg_scores.reserve(cells.size());
        for (const auto& [model, score] : cells) neg_scores.push_back(-score);
        auto ranks = rank_with_ties(neg_scores);  // descending score = rank 1
        auto& row = table.ranks[dataset];
        for (size_t i = 0; i < cells.size(); ++i) row[cells[i].first] = ranks[i];
        table.n_models[dataset] = static_cast<int>(cells.size());
    }
    return table;
}

TestReport kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw ConfigError("kruskal_wallis needs >= 2 groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw ConfigError("kruskal_wallis: empty group");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n_total = static_cast<double>(pooled.size());
    auto ranks = rank_with_ties(pooled);

    double h = 0.0;
    size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
        offset += g.size();
        h += rank_sum * rank_sum / static_cast<double>(g.size());
    }
    h = 12.0 / (n_total * (n_total + 1.0)) * h - 3.0 * (n_total + 1.0);

    double correction = 1.0 - tie_term(pooled) / (n_total * n_total * n_total - n_total);
    TestReport report;
    report.statistic_name = "H";
    report.df = static_cast<double>(groups.size() - 1);
    report.grouping = "groups";
    if (correction <= 0.0) {
        // Every value identical: no evidence of any difference.
        report.statistic = 0.0;
        report.p_value = 1.0;
        return report;
    }
    report.statistic = h / correction;
    if (report.statistic < 0.0) report.statistic = 0.0;  // rounding guard
    report.p_value = chi_squared_sf(report.statistic, report.df);
    return report;
}

TestReport dunn_test(const std::vector<std::vector<double>>& groups,
                     Correction correction, WarningList* warnings) {
    if (groups.size() < 2) throw ConfigError("dunn_test needs >= 2 groups");
    std::vector<int> included;
    std::vector<double> pooled;
    for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
        if (groups[g].empty()) {
            warn(warnings, "dunn_test: group " + std::to_string(g) + " is empty; excluded");
            continue;
        }
        included.push_back(g);
    }
    if (included.size() < 2) throw ConfigError("dunn_test: fewer than 2 non-empty groups");
    for (int g : included) pooled.insert(pooled.end(), groups[g].begin(), groups[g].end());

    const double n_total = static_cast<double>(pooled.size());
    auto ranks = rank_with_ties(pooled);
    std::vector<double> mean_rank(included.size(), 0.0);
    {
        size_t offset = 0;
        for (size_t gi = 0; gi < included.size(); ++gi) {
            size_t size = groups[included[gi]].size();
            for (size_t i = 0; i < size; ++i) mean_rank[gi] += ranks[offset + i];
            mean_rank[gi] /= static_cast<double>(size);
            offset += size;
        }
    }
    // Variance of a mean-rank difference, with tie correction.
    double base_var = n_total * (n_total + 1.0) / 12.0 -
                      tie_term(pooled) / (12.0 * (n_total - 1.0));

    TestReport report;
    report.statistic_name = "z";
    report.df = kNaN;
    report.correction = correction;
    report.grouping = "groups";
    const double m = static_cast<double>(included.size() * (included.size() - 1) / 2);
    double max_abs_z = 0.0, min_p = 1.0;
    for (size_t a = 0; a < included.size(); ++a) {
        for (size_t b = a + 1; b < included.size(); ++b) {
            double n_a = static_cast<double>(groups[included[a]].size());
            double n_b = static_cast<double>(groups[included[b]].size());
            double se = std::sqrt(base_var * (1.0 / n_a + 1.0 / n_b));
            double z = se > 0.0 ? (mean_rank[a] - mean_rank[b]) / se : 0.0;
            double p_raw = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
            double p_adj = correction == Correction::Bonferroni
                               ? std::min(1.0, p_raw * m)
                               : p_raw;
            report.pairwise.push_back(
                TestReport::Pairwise{included[a], included[b], z, p_raw, p_adj});
            max_abs_z = std::max(max_abs_z, std::fabs(z));
            min_p = std::min(min_p, p_adj);
        }
    }
    report.statistic = max_abs_z;
    report.p_value = min_p;
    return report;
}

TestReport wilcoxon_signed_rank(const std::vector<double>& xs,
                                const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("wilcoxon: length mismatch");
    std::vector<double> abs_diff;
    std::vector<bool> positive;
    for (size_t i = 0; i < xs.size(); ++i) {
        double d = xs[i] - ys[i];
        if (d == 0.0) continue;  // zero differences dropped
        abs_diff.push_back(std::fabs(d));
        positive.push_back(d > 0.0);
    }
    if (abs_diff.empty()) {
        throw ConstantInputError("wilcoxon undefined: all differences are zero");
    }
    const size_t n = abs_diff.size();
    auto ranks = rank_with_ties(abs_diff);
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (positive[i]) v += ranks[i];
    }

    TestReport report;
    report.statistic_name = "V";
    report.statistic = v;
    report.df = kNaN;
    report.grouping = "paired";

    if (n <= 25) {
        // Exact null distribution over all 2^n sign patterns, conditioned on
        // the observed ranks. Doubling makes tied (half-integer) ranks
        // integral for the subset-sum table.
        std::vector<int64_t> doubled(n);
        int64_t max_sum = 0;
        for (size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int64_t>(std::llround(2.0 * ranks[i]));
            max_sum += doubled[i];
        }
        std::vector<double> dist(static_cast<size_t>(max_sum) + 1, 0.0);
        dist[0] = 1.0;
        int64_t reached = 0;
        for (size_t i = 0; i < n; ++i) {
            reached += doubled[i];
            for (int64_t s = reached; s >= doubled[i]; --s) {
                dist[s] += dist[s - doubled[i]];
            }
        }
        const double total = std::pow(2.0, static_cast<double>(n));
        int64_t v2 = static_cast<int64_t>(std::llround(2.0 * v));
        double p_le = 0.0, p_ge = 0.0;
        for (int64_t s = 0; s <= max_sum; ++s) {
            if (s <= v2) p_le += dist[s];
            if (s >= v2) p_ge += dist[s];
        }
        report.p_value = std::min(1.0, 2.0 * std::min(p_le, p_ge) / total);
        return report;
    }

    const double nd = static_cast<double>(n);
    double mu = nd * (nd + 1.0) / 4.0;
    double sigma2 = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term(abs_diff) / 48.0;
    double z = (v - mu) / std::sqrt(sigma2);
    report.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
    return report;
}

DatasetCorrelation dataset_correlation(const Ledger& ledger) {
    std::map<std::string, std::map<std::string, double>> scores;  // dataset -> model -> score
    for (const auto& record : ledger) {
        if (!record.ok() || !std::isfinite(record.score)) continue;
        scores[record.dataset][record.model] = record.score;
    }
    DatasetCorrelation out;
    for (const auto& [dataset, cells] : scores) out.datasets.push_back(dataset);
    const size_t n = out.datasets.size();
    out.rho = Eigen::MatrixXd::Constant(n, n, kNaN);
    for (size_t i = 0; i < n; ++i) {
        out.rho(i, i) = 1.0;
        const auto& a = scores.at(out.datasets[i]);
        for (size_t j = i + 1; j < n; ++j) {
            const auto& b = scores.at(out.datasets[j]);
            std::vector<double> va, vb;
            for (const auto& [model, score] : a) {
                auto it = b.find(model);
                if (it != b.end()) {
                    va.push_back(score);
                    vb.push_back(it->second);
                }
            }
            if (va.size() < 3) continue;  // insufficient overlap: cell stays missing
            try {
                out.rho(i, j) = out.rho(j, i) = spearman(va, vb);
            } catch (const ConstantInputError&) {
                // degenerate score column: leave the cell missing
            }
        }
    }
    return out;
}

std::vector<BestRow> best_report(const Ledger& ledger) {
    std::map<std::string, BestRow> best;
    for (const auto& record : ledger) {
        if (!record.ok() || !std::isfinite(record.score)) continue;
        auto [it, inserted] = best.try_emplace(record.dataset);
        BestRow& row = it->second;
        if (inserted) {
            row.dataset = record.dataset;
            row.score = record.score;
            row.models = {record.model};
        } else if (record.score > row.score) {
            row.score = record.score;
            row.models = {record.model};
        } else if (record.score == row.score) {
            row.models.push_back(record.model);
        }
    }
    if (best.empty()) throw EmptyInputError("best_report: empty ledger");
    std::vector<BestRow> rows;
    rows.reserve(best.size());
    for (auto& [dataset, row] : best) {
        std::sort(row.models.begin(), row.models.end());
        row.models.erase(std::unique(row.models.begin(), row.models.end()),
                         row.models.end());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dsm
