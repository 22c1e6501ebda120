#include "dsm/rsa.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "dsm/evalsuite.hpp"  // spearman

namespace dsm {

Rsm build_rsm(const EmbeddingSpace& space, const std::vector<std::string>& wordlist,
              WarningList* warnings) {
    std::vector<uint32_t> ids;
    Rsm rsm;
    rsm.space_id = space.model_id();
    for (const auto& word : wordlist) {
        auto id = space.id_of(word);
        if (!id || space.norms()[*id] == 0.0) {
            warn(warnings, rsm.space_id + ": dropping '" + word +
                               (id ? "' (zero vector)" : "' (not in space)"));
            continue;
        }
        ids.push_back(*id);
        rsm.words.push_back(word);
    }
    const size_t n = ids.size();
    if (n < 3) throw InsufficientDataError("RSM needs at least 3 usable words");

    RowMatrixXd unit(n, space.dim());
    for (size_t i = 0; i < n; ++i) {
        unit.row(i) = space.vectors.row(ids[i]) / space.norms()[ids[i]];
    }
    rsm.values = unit * unit.transpose();
    for (size_t i = 0; i < n; ++i) rsm.values(i, i) = 1.0;
    return rsm;
}

std::vector<double> strict_upper_triangle(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(m.rows()) * (m.rows() - 1) / 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) out.push_back(m(i, j));
    }
    return out;
}

double rsa_correlate(const Rsm& r1, const Rsm& r2) {
    if (r1.words != r2.words) {
        throw AlignmentError("RSMs must share an identical wordlist");
    }
    return spearman(strict_upper_triangle(r1.values), strict_upper_triangle(r2.values));
}

// ---------------------------------------------------------------------------
// Sampling

std::string to_string(SampleScheme scheme) {
    switch (scheme) {
        case SampleScheme::Global: return "global";
        case SampleScheme::FreqHigh: return "freq_high";
        case SampleScheme::FreqMid: return "freq_mid";
        case SampleScheme::FreqLow: return "freq_low";
        case SampleScheme::Pos: return "pos";
    }
    return "global";
}

SampleScheme sample_scheme_from_string(std::string_view s) {
    if (s == "global") return SampleScheme::Global;
    if (s == "freq_high") return SampleScheme::FreqHigh;
    if (s == "freq_mid") return SampleScheme::FreqMid;
    if (s == "freq_low") return SampleScheme::FreqLow;
    if (s == "pos") return SampleScheme::Pos;
    throw ConfigError("unknown sampling scheme: " + std::string(s));
}

SamplePlan SamplePlan::defaults(SampleScheme scheme) {
    SamplePlan plan;
    plan.scheme = scheme;
    switch (scheme) {
        case SampleScheme::Global: plan.n_samples = 100; break;
        case SampleScheme::FreqHigh: plan.n_samples = 1; break;
        case SampleScheme::FreqMid:
        case SampleScheme::FreqLow: plan.n_samples = 10; break;
        case SampleScheme::Pos: plan.n_samples = 4; break;
    }
    return plan;
}

namespace {

// Disjoint chunks of a seeded shuffle of the stratum.
std::vector<WordSample> chop(std::vector<std::string> stratum, const std::string& prefix,
                             int n_samples, int sample_size, uint64_t seed,
                             WarningList* warnings) {
    std::mt19937_64 rng(mix64(seed, fnv1a(prefix)));
    std::shuffle(stratum.begin(), stratum.end(), rng);
    std::vector<WordSample> out;
    size_t offset = 0;
    for (int s = 0; s < n_samples && offset < stratum.size(); ++s) {
        size_t take = std::min<size_t>(sample_size, stratum.size() - offset);
        WordSample sample;
        sample.label = prefix + "-" + std::to_string(s);
        sample.words.assign(stratum.begin() + offset, stratum.begin() + offset + take);
        std::sort(sample.words.begin(), sample.words.end());
        out.push_back(std::move(sample));
        offset += take;
    }
    if (static_cast<int>(out.size()) < n_samples ||
        (out.size() > 0 && out.back().words.size() < static_cast<size_t>(sample_size))) {
        warn(warnings, prefix + ": stratum of " + std::to_string(stratum.size()) +
                           " words is smaller than " + std::to_string(n_samples) + "x" +
                           std::to_string(sample_size) + "; samples reduced");
    }
    return out;
}

}  // namespace

std::vector<WordSample> sample_strata(const Vocabulary& vocab, const SamplePlan& plan,
                                      WarningList* warnings) {
    // Vocabulary ids are frequency-descending, so the top-N stratum is a
    // prefix of the id range.
    const int64_t top_n = std::min<int64_t>(plan.high_top, vocab.size());
    auto in_top = [&](WordId id) { return static_cast<int64_t>(id) < top_n; };

    switch (plan.scheme) {
        case SampleScheme::Global: {
            std::vector<std::string> stratum = vocab.words;
            return chop(std::move(stratum), "global", plan.n_samples, plan.sample_size,
                        plan.seed, warnings);
        }
        case SampleScheme::FreqHigh: {
            WordSample sample;
            sample.label = "freq_high-0";
            for (int64_t id = 0; id < top_n; ++id) {
                if (id >= plan.sample_size) break;
                sample.words.push_back(vocab.words[id]);
            }
            if (static_cast<int64_t>(sample.words.size()) < plan.sample_size) {
                warn(warnings, "freq_high: vocabulary smaller than sample_size");
            }
            std::sort(sample.words.begin(), sample.words.end());
            return {std::move(sample)};
        }
        case SampleScheme::FreqMid: {
            std::vector<std::string> stratum;
            for (WordId id = 0; id < vocab.size(); ++id) {
                if (!in_top(id) && vocab.freq[id] > plan.mid_min_freq) {
                    stratum.push_back(vocab.words[id]);
                }
            }
            return chop(std::move(stratum), "freq_mid", plan.n_samples, plan.sample_size,
                        plan.seed, warnings);
        }
        case SampleScheme::FreqLow: {
            std::vector<std::string> stratum;
            for (WordId id = 0; id < vocab.size(); ++id) {
                if (vocab.freq[id] >= plan.low_min_freq && vocab.freq[id] <= plan.mid_min_freq) {
                    stratum.push_back(vocab.words[id]);
                }
            }
            return chop(std::move(stratum), "freq_low", plan.n_samples, plan.sample_size,
                        plan.seed, warnings);
        }
        case SampleScheme::Pos: {
            if (!vocab.has_pos()) {
                throw ConfigError("pos sampling needs a POS-tagged vocabulary");
            }
            // Majority-POS words above the frequency floor, split per POS
            // into a high set (top sample_size by frequency) and disjoint
            // mid-frequency samples of the remainder.
            std::vector<WordSample> out;
            for (PosTag tag : {PosTag::Noun, PosTag::Verb, PosTag::Adjective}) {
                std::vector<WordId> members;
                for (WordId id = 0; id < vocab.size(); ++id) {
                    if (vocab.freq[id] > plan.mid_min_freq && vocab.pos_tag[id] == tag) {
                        members.push_back(id);  // id order = frequency order
                    }
                }
                WordSample high;
                high.label = to_string(tag) + "-high";
                std::vector<std::string> mid_stratum;
                for (size_t i = 0; i < members.size(); ++i) {
                    if (i < static_cast<size_t>(plan.sample_size)) {
                        high.words.push_back(vocab.words[members[i]]);
                    } else {
                        mid_stratum.push_back(vocab.words[members[i]]);
                    }
                }
                if (high.words.size() < static_cast<size_t>(plan.sample_size)) {
                    warn(warnings, high.label + ": only " +
                                       std::to_string(high.words.size()) + " words");
                }
                std::sort(high.words.begin(), high.words.end());
                out.push_back(std::move(high));
                auto mid = chop(std::move(mid_stratum), to_string(tag) + "-mid",
                                plan.n_samples, plan.sample_size, plan.seed, warnings);
                out.insert(out.end(), mid.begin(), mid.end());
            }
            return out;
        }
    }
    throw ConfigError("unknown sampling scheme");
}

// ---------------------------------------------------------------------------
// Report

const RsaPairSummary& RsaReport::pair(size_t a, size_t b) const {
    if (a > b) std::swap(a, b);
    for (const auto& p : pairs) {
        if (p.space_a == space_ids[a] && p.space_b == space_ids[b]) return p;
    }
    throw Error("rsa report: pair not found");
}

RsaReport rsa_report(const std::vector<const EmbeddingSpace*>& spaces,
                     const std::vector<WordSample>& samples, WarningList* warnings) {
    if (spaces.size() < 2) throw ConfigError("rsa_report needs at least 2 spaces");
    if (samples.empty()) throw ConfigError("rsa_report needs at least 1 sample");

    RsaReport report;
    for (const auto* s : spaces) report.space_ids.push_back(s->model_id());
    for (const auto& s : samples) report.sample_labels.push_back(s.label);

    // Per sample: intersect the wordlist across all spaces once, then build
    // one RSM per space on the shared list.
    std::vector<std::vector<Rsm>> rsms(samples.size());
    for (size_t si = 0; si < samples.size(); ++si) {
        std::vector<std::string> shared;
        for (const auto& word : samples[si].words) {
            bool everywhere = true;
            for (const auto* space : spaces) {
                auto id = space->id_of(word);
                if (!id || space->norms()[*id] == 0.0) {
                    everywhere = false;
                    break;
                }
            }
            if (everywhere) shared.push_back(word);
        }
        if (shared.size() < samples[si].words.size()) {
            warn(warnings, samples[si].label + ": " +
                               std::to_string(samples[si].words.size() - shared.size()) +
                               " word(s) missing from some space; sample shrunk to " +
                               std::to_string(shared.size()));
        }
        for (const auto* space : spaces) {
            rsms[si].push_back(build_rsm(*space, shared, warnings));
        }
    }

    for (size_t a = 0; a < spaces.size(); ++a) {
        for (size_t b = a + 1; b < spaces.size(); ++b) {
            RsaPairSummary summary;
            summary.space_a = report.space_ids[a];
            summary.space_b = report.space_ids[b];
            for (size_t si = 0; si < samples.size(); ++si) {
                summary.per_sample.push_back(rsa_correlate(rsms[si][a], rsms[si][b]));
            }
            const auto& v = summary.per_sample;
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            summary.mean = mean;
            summary.sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
            std::vector<double> sorted = v;
            std::sort(sorted.begin(), sorted.end());
            summary.median = sorted.size() % 2 == 1
                                 ? sorted[sorted.size() / 2]
                                 : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                          sorted[sorted.size() / 2]);
            report.pairs.push_back(std::move(summary));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// RSM files

void save_rsm(const Rsm& rsm, const std::string& base_path) {
    {
        std::ofstream words(base_path + ".words.tsv");
        if (!words) throw Error("cannot write RSM wordlist: " + base_path + ".words.tsv");
        for (const auto& w : rsm.words) words << w << '\n';
    }
    std::ofstream bin(base_path + ".rsm", std::ios::binary);
    if (!bin) throw Error("cannot write RSM file: " + base_path + ".rsm");
    auto tri = strict_upper_triangle(rsm.values);
    static_assert(sizeof(double) == 8);
    // Little-endian hosts write doubles verbatim.
    bin.write(reinterpret_cast<const char*>(tri.data()),
              static_cast<std::streamsize>(tri.size() * sizeof(double)));
    if (!bin) throw Error("failed writing RSM file: " + base_path + ".rsm");
}

Rsm load_rsm(const std::string& base_path) {
    Rsm rsm;
    {
        std::ifstream words(base_path + ".words.tsv");
        if (!words) throw Error("cannot open RSM wordlist: " + base_path + ".words.tsv");
        std::string line;
        while (std::getline(words, line)) {
            if (!line.empty()) rsm.words.push_back(line);
        }
    }
    const size_t n = rsm.words.size();
    std::ifstream bin(base_path + ".rsm", std::ios::binary);
    if (!bin) throw Error("cannot open RSM file: " + base_path + ".rsm");
    std::vector<double> tri(n * (n - 1) / 2);
    bin.read(reinterpret_cast<char*>(tri.data()),
             static_cast<std::streamsize>(tri.size() * sizeof(double)));
    if (static_cast<size_t>(bin.gcount()) != tri.size() * sizeof(double)) {
        throw FormatError(base_path + ".rsm: size disagrees with wordlist");
    }
    rsm.values = Eigen::MatrixXd::Identity(n, n);
    size_t idx = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            rsm.values(i, j) = tri[idx];
            rsm.values(j, i) = tri[idx];
            ++idx;
        }
    }
    return rsm;
}

size_t duplicate_vector_count(const EmbeddingSpace& space) {
    // Exact-byte duplicates, the LDA-style degeneracy counter.
    std::map<std::vector<double>, size_t> seen;
    size_t duplicates = 0;
    for (Eigen::Index i = 0; i < space.vectors.rows(); ++i) {
        std::vector<double> key(space.vectors.row(i).data(),
                                space.vectors.row(i).data() + space.vectors.cols());
        if (++seen[key] > 1) ++duplicates;
    }
    return duplicates;
}

}  // namespace dsm
