#include "dsm/randindex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dsm {

Eigen::VectorXd IndexVectorSet::dense(WordId id) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    for (uint32_t p : vectors[id].plus) v[p] = 1.0;
    for (uint32_t p : vectors[id].minus) v[p] = -1.0;
    return v;
}

IndexVectorSet make_index_vectors(const Vocabulary& vocab, int dim, int delta,
                                  uint64_t seed) {
    if (delta % 2 != 0) throw ConfigError("ri delta must be even");
    if (delta < 2 || delta > dim) throw ConfigError("ri delta must lie in [2, dim]");

    IndexVectorSet set;
    set.dim = dim;
    set.delta = delta;
    set.seed = seed;
    set.vectors.resize(vocab.size());
    std::vector<uint32_t> positions(delta);
    for (WordId id = 0; id < vocab.size(); ++id) {
        // Floyd's sampling of delta distinct positions, keyed by (seed, id).
        std::mt19937_64 rng(mix64(seed, 0x52490000ULL, id));
        std::vector<uint32_t> chosen;
        chosen.reserve(delta);
        for (int j = dim - delta; j < dim; ++j) {
            uint32_t t = static_cast<uint32_t>(rng() % static_cast<uint64_t>(j + 1));
            if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
                chosen.push_back(static_cast<uint32_t>(j));
            } else {
                chosen.push_back(t);
            }
        }
        std::copy(chosen.begin(), chosen.end(), positions.begin());
        auto& vec = set.vectors[id];
        vec.plus.assign(positions.begin(), positions.begin() + delta / 2);
        vec.minus.assign(positions.begin() + delta / 2, positions.end());
        std::sort(vec.plus.begin(), vec.plus.end());
        std::sort(vec.minus.begin(), vec.minus.end());
    }

    // One fixed random permutation encodes "left neighbor"; its inverse
    // encodes "right neighbor".
    set.perm_left.resize(dim);
    std::iota(set.perm_left.begin(), set.perm_left.end(), 0);
    std::mt19937_64 perm_rng(mix64(seed, 0x52495045ULL));
    std::shuffle(set.perm_left.begin(), set.perm_left.end(), perm_rng);
    set.perm_right.resize(dim);
    for (int i = 0; i < dim; ++i) set.perm_right[set.perm_left[i]] = static_cast<uint32_t>(i);
    return set;
}

EmbeddingSpace train_ri(SentenceReader& stream, const Vocabulary& vocab,
                        const IndexVectorSet& idx, const RiConfig& cfg) {
    if (idx.vectors.size() != vocab.size()) {
        throw ConfigError("index vector set was built for a different vocabulary");
    }
    if (cfg.window_radius < 1) throw ConfigError("window_radius must be >= 1");

    RowMatrixXd acc = RowMatrixXd::Zero(vocab.size(), idx.dim);
    std::vector<int64_t> seen(vocab.size(), 0);  // dynamic weighting counter

    auto apply = [&](WordId target, WordId context, bool left_of_target, double w) {
        const auto& v = idx.vectors[context];
        auto* row = acc.row(target).data();
        if (!cfg.permute) {
            for (uint32_t p : v.plus) row[p] += w;
            for (uint32_t p : v.minus) row[p] -= w;
        } else {
            const auto& perm = left_of_target ? idx.perm_left : idx.perm_right;
            for (uint32_t p : v.plus) row[perm[p]] += w;
            for (uint32_t p : v.minus) row[perm[p]] -= w;
        }
    };

    Sentence s;
    std::vector<WordId> ids;
    const int64_t radius = cfg.window_radius;
    while (stream.next(s)) {
        ids.clear();
        for (const auto& tok : s.tokens) {
            auto id = vocab.id_of(tok);
            ids.push_back(id ? *id : kNoWord);
        }
        const int64_t n = static_cast<int64_t>(ids.size());
        for (int64_t i = 0; i < n; ++i) {
            if (ids[i] != kNoWord) ++seen[ids[i]];
            if (ids[i] == kNoWord) continue;
            int64_t lo = std::max<int64_t>(0, i - radius);
            int64_t hi = std::min<int64_t>(n - 1, i + radius);
            for (int64_t j = lo; j <= hi; ++j) {
                if (j == i || ids[j] == kNoWord) continue;
                double w = 1.0;
                if (cfg.dynamic_weighting) {
                    w = std::exp(-static_cast<double>(seen[ids[j]]) / cfg.weighting_theta);
                }
                apply(ids[i], ids[j], j < i, w);
            }
        }
    }

    EmbeddingSpace space(vocab.words, std::move(acc));
    space.meta["method"] = cfg.permute ? "ri-perm" : "ri";
    space.meta["dim"] = std::to_string(idx.dim);
    space.meta["delta"] = std::to_string(idx.delta);
    space.meta["seed"] = std::to_string(idx.seed);
    space.meta["window_radius"] = std::to_string(cfg.window_radius);
    if (cfg.dynamic_weighting) {
        // The damping law is a reconstruction of the scheme the original
        // system only describes qualitatively.
        space.meta["dynamic_weighting"] = "exp(-f_seen/theta),theta=" +
                                          format_g9(cfg.weighting_theta) +
                                          ",reconstruction";
    }
    return space;
}

}  // namespace dsm
