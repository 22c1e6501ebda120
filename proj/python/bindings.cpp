#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsm/cooccur.hpp"
#include "dsm/corpus.hpp"
#include "dsm/embedding.hpp"
#include "dsm/evalsuite.hpp"
#include "dsm/randindex.hpp"
#include "dsm/reweight.hpp"
#include "dsm/rsa.hpp"
#include "dsm/stats.hpp"
#include "dsm/svd.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

std::vector<dsm::Sentence> to_sentences(
    const std::vector<std::vector<std::string>>& token_lists,
    const std::vector<int64_t>& doc_ids) {
    std::vector<dsm::Sentence> out;
    out.reserve(token_lists.size());
    for (size_t i = 0; i < token_lists.size(); ++i) {
        dsm::Sentence s;
        for (const auto& tok : token_lists[i]) s.tokens.push_back(dsm::lowercase(tok));
        s.doc_id = doc_ids.empty() ? 0 : doc_ids[i];
        out.push_back(std::move(s));
    }
    return out;
}

dsm::ContextSpec make_spec(const std::string& context, int radius, int64_t typed_min_freq) {
    dsm::ContextSpec spec;
    spec.window_radius = radius;
    spec.typed_min_freq = typed_min_freq;
    if (context == "window") {
        spec.kind = dsm::ContextKind::Window;
    } else if (context == "dep-filtered") {
        spec.kind = dsm::ContextKind::DepFiltered;
    } else if (context == "dep-typed") {
        spec.kind = dsm::ContextKind::DepTyped;
    } else if (context == "document") {
        spec.kind = dsm::ContextKind::Document;
    } else {
        throw dsm::ConfigError("unknown context kind: " + context);
    }
    return spec;
}

py::dict eval_to_dict(const dsm::EvalResult& r) {
    py::dict d;
    d["model"] = r.model_id;
    d["dataset"] = r.dataset;
    d["task"] = dsm::to_string(r.task);
    d["metric"] = r.metric;
    d["score"] = r.score;
    d["coverage"] = r.coverage;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "count-based distributional semantic models: training, evaluation, RSA";

    py::register_exception<dsm::Error>(m, "DsmError");

    py::class_<dsm::Vocabulary>(m, "Vocabulary")
        .def_readonly("words", &dsm::Vocabulary::words)
        .def_readonly("total_tokens", &dsm::Vocabulary::total_tokens)
        .def("__len__", &dsm::Vocabulary::size)
        .def("__contains__",
             [](const dsm::Vocabulary& v, const std::string& w) {
                 return v.id_of(w).has_value();
             })
        .def("freq",
             [](const dsm::Vocabulary& v, const std::string& w) {
                 auto id = v.id_of(w);
                 return id ? v.freq[*id] : int64_t(0);
             })
        .def("save", &dsm::save_vocabulary, "vocab"_a);

    py::class_<dsm::SparseCooccurrenceMatrix>(m, "CooccurrenceMatrix")
        .def_property_readonly("shape",
                               [](const dsm::SparseCooccurrenceMatrix& mat) {
                                   return py::make_tuple(mat.rows(), mat.cols());
                               })
        .def_property_readonly("nnz", &dsm::SparseCooccurrenceMatrix::nnz)
        .def_readonly("row_labels", &dsm::SparseCooccurrenceMatrix::row_labels)
        .def_readonly("col_labels", &dsm::SparseCooccurrenceMatrix::col_labels)
        .def_readonly("grand_total", &dsm::SparseCooccurrenceMatrix::grand_total)
        .def("value", &dsm::SparseCooccurrenceMatrix::value_at, "row"_a, "col"_a)
        .def("todense",
             [](const dsm::SparseCooccurrenceMatrix& mat) {
                 dsm::RowMatrixXd dense = dsm::RowMatrixXd::Zero(mat.rows(), mat.cols());
                 for (const auto& e : mat.entries) dense(e.row, e.col) = e.value;
                 return dense;
             })
        .def("save", &dsm::save_matrix, "path"_a);

    py::class_<dsm::EmbeddingSpace>(m, "EmbeddingSpace")
        .def(py::init([](std::vector<std::string> words, dsm::RowMatrixXd vectors) {
                 return dsm::EmbeddingSpace(std::move(words), std::move(vectors));
             }),
             "words"_a, "vectors"_a)
        .def_readonly("words", &dsm::EmbeddingSpace::words)
        .def_property_readonly("vectors",
                               [](const dsm::EmbeddingSpace& s) { return s.vectors; })
        .def_property_readonly("dim", &dsm::EmbeddingSpace::dim)
        .def_property_readonly("model_id", &dsm::EmbeddingSpace::model_id)
        .def_property(
            "meta", [](const dsm::EmbeddingSpace& s) { return s.meta; },
            [](dsm::EmbeddingSpace& s, std::map<std::string, std::string> meta) {
                s.meta = std::move(meta);
            })
        .def("__len__", &dsm::EmbeddingSpace::size)
        .def("__contains__",
             [](const dsm::EmbeddingSpace& s, const std::string& w) {
                 return s.id_of(w).has_value();
             })
        .def("vector", &dsm::EmbeddingSpace::vector_of, "word"_a)
        .def(
            "nearest",
            [](const dsm::EmbeddingSpace& s, const std::string& word, size_t k,
               const std::set<std::string>& exclude) {
                std::set<std::string> ex = exclude;
                ex.insert(word);
                py::list out;
                for (const auto& hit : dsm::nearest(s, s.vector_of(word), k, ex)) {
                    out.append(py::make_tuple(hit.word, hit.score));
                }
                return out;
            },
            "word"_a, "k"_a = 10, "exclude"_a = std::set<std::string>{})
        .def(
            "nearest_to_vector",
            [](const dsm::EmbeddingSpace& s, const Eigen::VectorXd& query, size_t k,
               const std::set<std::string>& exclude) {
                py::list out;
                for (const auto& hit : dsm::nearest(s, query, k, exclude)) {
                    out.append(py::make_tuple(hit.word, hit.score));
                }
                return out;
            },
            "query"_a, "k"_a = 10, "exclude"_a = std::set<std::string>{})
        .def("save", &dsm::export_text, "path"_a);

    m.def(
        "build_vocabulary",
        [](const std::vector<std::vector<std::string>>& sentences, int64_t min_count,
           const std::vector<int64_t>& doc_ids) {
            dsm::VectorReader reader(to_sentences(sentences, doc_ids));
            return dsm::build_vocabulary(reader, min_count);
        },
        "sentences"_a, "min_count"_a = 1, "doc_ids"_a = std::vector<int64_t>{});

    m.def("load_vocabulary", &dsm::load_vocabulary, "path"_a);

    m.def(
        "build_vocabulary_from_corpus",
        [](const std::string& path, int64_t min_count) {
            auto reader = dsm::open_corpus(path);
            return dsm::build_vocabulary(*reader, min_count);
        },
        "path"_a, "min_count"_a = 100);

    m.def(
        "subsample",
        [](const std::vector<std::vector<std::string>>& sentences,
           const dsm::Vocabulary& vocab, double threshold, uint64_t seed,
           const std::vector<int64_t>& doc_ids) {
            dsm::VectorReader reader(to_sentences(sentences, doc_ids));
            auto kept = dsm::subsample(reader, vocab, dsm::SubsampleConfig{threshold, seed});
            std::vector<std::vector<std::string>> out;
            out.reserve(kept.size());
            for (auto& s : kept) out.push_back(std::move(s.tokens));
            return out;
        },
        "sentences"_a, "vocab"_a, "threshold"_a = 1e-5, "seed"_a = 0,
        "doc_ids"_a = std::vector<int64_t>{});

    m.def(
        "extract_cooccurrence",
        [](const std::vector<std::vector<std::string>>& sentences,
           const dsm::Vocabulary& vocab, const std::string& context, int radius,
           int64_t typed_min_freq, const std::vector<int64_t>& doc_ids) {
            dsm::VectorReader reader(to_sentences(sentences, doc_ids));
            return dsm::extract(reader, vocab, make_spec(context, radius, typed_min_freq));
        },
        "sentences"_a, "vocab"_a, "context"_a = "window", "radius"_a = 2,
        "typed_min_freq"_a = 500, "doc_ids"_a = std::vector<int64_t>{});

    m.def(
        "extract_cooccurrence_from_corpus",
        [](const std::string& path, const dsm::Vocabulary& vocab,
           const std::string& context, int radius, int64_t typed_min_freq) {
            auto reader = dsm::open_corpus(path);
            return dsm::extract(*reader, vocab, make_spec(context, radius, typed_min_freq));
        },
        "path"_a, "vocab"_a, "context"_a = "window", "radius"_a = 2,
        "typed_min_freq"_a = 500);

    m.def("load_matrix", &dsm::load_matrix, "path"_a);
    m.def("prune_contexts", &dsm::prune_contexts, "matrix"_a, "top_k"_a);
    m.def("ppmi", &dsm::ppmi, "matrix"_a, "alpha"_a = 0.75);
    m.def("log_entropy", &dsm::log_entropy, "matrix"_a);

    m.def(
        "truncated_svd",
        [](const dsm::SparseCooccurrenceMatrix& mat, int dim, uint64_t seed,
           int power_iterations, int oversample) {
            auto svd = dsm::truncated_svd(
                mat, dim, dsm::SvdOptions{power_iterations, oversample, seed});
            return py::make_tuple(svd.U, svd.S, svd.V);
        },
        "matrix"_a, "dim"_a, "seed"_a = 0, "power_iterations"_a = 4, "oversample"_a = 10);

    m.def(
        "svd_embeddings",
        [](const dsm::SparseCooccurrenceMatrix& mat, int dim, uint64_t seed) {
            return dsm::svd_embeddings(mat, dim, dsm::SvdOptions{4, 10, seed});
        },
        "matrix"_a, "dim"_a, "seed"_a = 0);

    m.def(
        "train_ri",
        [](const std::vector<std::vector<std::string>>& sentences,
           const dsm::Vocabulary& vocab, int dim, int delta, int window, bool permute,
           bool dynamic_weighting, double theta, uint64_t seed) {
            auto idx = dsm::make_index_vectors(vocab, dim, delta, seed);
            dsm::RiConfig cfg;
            cfg.window_radius = window;
            cfg.permute = permute;
            cfg.dynamic_weighting = dynamic_weighting;
            cfg.weighting_theta = theta;
            dsm::VectorReader reader(to_sentences(sentences, {}));
            return dsm::train_ri(reader, vocab, idx, cfg);
        },
        "sentences"_a, "vocab"_a, "dim"_a = 2000, "delta"_a = 10, "window"_a = 2,
        "permute"_a = false, "dynamic_weighting"_a = false, "theta"_a = 10000.0,
        "seed"_a = 0);

    m.def("cosine", &dsm::cosine, "u"_a, "v"_a);
    m.def("load_embeddings", &dsm::import_text, "path"_a);
    m.def(
        "pool_tokens",
        [](const std::string& path) { return dsm::pool_tokens(path, nullptr); },
        "path"_a);

    py::class_<dsm::BenchmarkDataset>(m, "BenchmarkDataset")
        .def_readonly("name", &dsm::BenchmarkDataset::name)
        .def_property_readonly(
            "task",
            [](const dsm::BenchmarkDataset& ds) { return dsm::to_string(ds.task); })
        .def("__len__", &dsm::BenchmarkDataset::size);

    m.def("load_dataset", &dsm::load_dataset, "path"_a);
    m.def(
        "evaluate",
        [](const dsm::EmbeddingSpace& space, const dsm::BenchmarkDataset& ds,
           int restarts, uint64_t seed) {
            return eval_to_dict(dsm::evaluate(space, ds, restarts, seed, nullptr));
        },
        "space"_a, "dataset"_a, "restarts"_a = 10, "seed"_a = 0);
    m.def(
        "evaluate_file",
        [](const dsm::EmbeddingSpace& space, const std::string& dataset_path,
           int restarts, uint64_t seed) {
            auto ds = dsm::load_dataset(dataset_path);
            return eval_to_dict(dsm::evaluate(space, ds, restarts, seed, nullptr));
        },
        "space"_a, "dataset_path"_a, "restarts"_a = 10, "seed"_a = 0);

    m.def("spearman", &dsm::spearman, "xs"_a, "ys"_a);
    m.def("purity", &dsm::purity, "assignment"_a, "gold"_a, "num_clusters"_a);
    m.def(
        "kmeans",
        [](const dsm::RowMatrixXd& points, int k, int restarts, uint64_t seed) {
            auto result = dsm::kmeans(points, k, restarts, seed);
            return py::make_tuple(result.assignment, result.wcss);
        },
        "points"_a, "k"_a, "restarts"_a = 10, "seed"_a = 0);

    py::class_<dsm::Rsm>(m, "Rsm")
        .def_readonly("words", &dsm::Rsm::words)
        .def_readonly("values", &dsm::Rsm::values)
        .def_readonly("space_id", &dsm::Rsm::space_id);

    m.def(
        "build_rsm",
        [](const dsm::EmbeddingSpace& space, const std::vector<std::string>& words) {
            return dsm::build_rsm(space, words, nullptr);
        },
        "space"_a, "words"_a);
    m.def("rsa_correlate", &dsm::rsa_correlate, "rsm1"_a, "rsm2"_a);
    m.def(
        "sample_strata",
        [](const dsm::Vocabulary& vocab, const std::string& scheme, int n_samples,
           int sample_size, int64_t high_top, int64_t mid_min_freq, int64_t low_min_freq,
           uint64_t seed) {
            dsm::SamplePlan plan =
                dsm::SamplePlan::defaults(dsm::sample_scheme_from_string(scheme));
            if (n_samples > 0) plan.n_samples = n_samples;
            plan.sample_size = sample_size;
            plan.high_top = high_top;
            plan.mid_min_freq = mid_min_freq;
            plan.low_min_freq = low_min_freq;
            plan.seed = seed;
            py::list out;
            for (const auto& sample : dsm::sample_strata(vocab, plan, nullptr)) {
                out.append(py::make_tuple(sample.label, sample.words));
            }
            return out;
        },
        "vocab"_a, "scheme"_a = "global", "n_samples"_a = -1, "sample_size"_a = 1000,
        "high_top"_a = 1000, "mid_min_freq"_a = 500, "low_min_freq"_a = 100, "seed"_a = 0);

    m.def(
        "kruskal_wallis",
        [](const std::vector<std::vector<double>>& groups) {
            auto report = dsm::kruskal_wallis(groups);
            py::dict d;
            d["H"] = report.statistic;
            d["df"] = report.df;
            d["p"] = report.p_value;
            return d;
        },
        "groups"_a);
    m.def(
        "dunn_test",
        [](const std::vector<std::vector<double>>& groups, bool bonferroni) {
            auto report = dsm::dunn_test(
                groups, bonferroni ? dsm::Correction::Bonferroni : dsm::Correction::None);
            py::list out;
            for (const auto& pair : report.pairwise) {
                py::dict d;
                d["a"] = pair.group_a;
                d["b"] = pair.group_b;
                d["z"] = pair.z;
                d["p_raw"] = pair.p_raw;
                d["p_adjusted"] = pair.p_adjusted;
                out.append(d);
            }
            return out;
        },
        "groups"_a, "bonferroni"_a = true);
    m.def(
        "wilcoxon_signed_rank",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            auto report = dsm::wilcoxon_signed_rank(xs, ys);
            py::dict d;
            d["V"] = report.statistic;
            d["p"] = report.p_value;
            return d;
        },
        "xs"_a, "ys"_a);
}
