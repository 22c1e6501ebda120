// dsm: corpus-to-scores pipeline driver.
//
//   vocab -> subsample -> cooc -> ppmi/logent -> svd | ri | pool
//   eval / rsa / stats / report / grid

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dsm/cooccur.hpp"
#include "dsm/corpus.hpp"
#include "dsm/embedding.hpp"
#include "dsm/evalsuite.hpp"
#include "dsm/grid.hpp"
#include "dsm/randindex.hpp"
#include "dsm/reweight.hpp"
#include "dsm/rsa.hpp"
#include "dsm/stats.hpp"
#include "dsm/svd.hpp"

namespace fs = std::filesystem;

namespace {

void print_warnings(const dsm::WarningList& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string basename_stem(const std::string& path) {
    return fs::path(path).stem().string();
}

// Short context code used in model ids: w2 / w10 / synf / synt / doc.
std::string context_code(const dsm::SparseCooccurrenceMatrix& m) {
    switch (m.kind) {
        case dsm::ContextKind::Window: {
            auto it = m.meta.find("window_radius");
            return "w" + (it != m.meta.end() ? it->second : std::string("?"));
        }
        case dsm::ContextKind::DepFiltered: return "synf";
        case dsm::ContextKind::DepTyped: return "synt";
        case dsm::ContextKind::Document: return "doc";
    }
    return "?";
}

dsm::EmbeddingSpace load_space(const std::string& path, const std::string& model_id) {
    auto space = dsm::import_text(path);
    if (!model_id.empty()) {
        space.meta["model_id"] = model_id;
    } else if (space.meta.count("model_id") == 0) {
        space.meta["model_id"] = basename_stem(path);
    }
    return space;
}

std::vector<std::string> suite_files(const std::vector<std::string>& suite) {
    std::vector<std::string> files;
    for (const auto& entry : suite) {
        if (fs::is_directory(entry)) {
            for (const auto& p : fs::directory_iterator(entry)) {
                if (p.path().extension() == ".tsv") files.push_back(p.path().string());
            }
        } else {
            files.push_back(entry);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

// model id convention <MODEL>.<context>.<dim>
std::string factor_of(const std::string& model_id, const std::string& factor) {
    auto parts = dsm::split(model_id, '.');
    if (factor == "model") return parts.empty() ? model_id : parts[0];
    if (factor == "context") return parts.size() > 1 ? parts[1] : "?";
    if (factor == "dim") return parts.size() > 2 ? parts[2] : "?";
    return model_id;
}

std::vector<double> read_numbers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dsm::Error("cannot open numeric file: " + path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    return values;
}

int run(int argc, char** argv) {
    CLI::App app{"count-based distributional semantic models: training, "
                 "evaluation, and space comparison"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags win");
    app.get_config_formatter_base()->comment('#');

    // ---- vocab ----
    auto* vocab_cmd = app.add_subcommand("vocab", "build a vocabulary from a corpus");
    std::string corpus_path, vocab_out;
    int64_t min_count = 100;
    vocab_cmd->add_option("--corpus", corpus_path, "plain or .conllu corpus")->required();
    vocab_cmd->add_option("--min-count", min_count, "frequency threshold");
    vocab_cmd->add_option("--out", vocab_out, "vocabulary TSV")->required();

    // ---- subsample ----
    auto* sub_cmd = app.add_subcommand("subsample", "frequency-subsample a corpus");
    std::string sub_corpus, sub_vocab, sub_out;
    double threshold = 1e-5;
    uint64_t sub_seed = 0;
    sub_cmd->add_option("--corpus", sub_corpus)->required();
    sub_cmd->add_option("--vocab", sub_vocab)->required();
    sub_cmd->add_option("--threshold", threshold, "relative frequency threshold t");
    sub_cmd->add_option("--seed", sub_seed);
    sub_cmd->add_option("--out", sub_out, "output corpus (same format as input)")->required();

    // ---- cooc ----
    auto* cooc_cmd = app.add_subcommand("cooc", "extract a co-occurrence matrix");
    std::string cooc_corpus, cooc_vocab, cooc_out, context = "window2";
    int64_t typed_min_freq = 500;
    int64_t top_k = 0;
    cooc_cmd->add_option("--corpus", cooc_corpus)->required();
    cooc_cmd->add_option("--vocab", cooc_vocab)->required();
    cooc_cmd->add_option("--context", context,
                         "window2|window10|window<r>|dep-filtered|dep-typed|document");
    cooc_cmd->add_option("--typed-min-freq", typed_min_freq,
                         "drop typed contexts with frequency <= this");
    cooc_cmd->add_option("--top-k", top_k, "keep only the top-k contexts by frequency");
    cooc_cmd->add_option("--out", cooc_out)->required();

    // ---- ppmi ----
    auto* ppmi_cmd = app.add_subcommand("ppmi", "smoothed positive PMI weighting");
    std::string ppmi_in, ppmi_out, ppmi_vec, ppmi_id;
    double alpha = 0.75;
    ppmi_cmd->add_option("--matrix", ppmi_in)->required();
    ppmi_cmd->add_option("--alpha", alpha, "context smoothing exponent");
    ppmi_cmd->add_option("--out", ppmi_out)->required();
    ppmi_cmd->add_option("--vec", ppmi_vec, "also export dense explicit vectors");
    ppmi_cmd->add_option("--model-id", ppmi_id);

    // ---- logent ----
    auto* logent_cmd = app.add_subcommand("logent", "log-entropy weighting");
    std::string logent_in, logent_out;
    logent_cmd->add_option("--matrix", logent_in)->required();
    logent_cmd->add_option("--out", logent_out)->required();

    // ---- svd ----
    auto* svd_cmd = app.add_subcommand("svd", "truncated SVD embeddings (rows of U)");
    std::string svd_in, svd_out, svd_id;
    int svd_dim = 300;
    uint64_t svd_seed = 0;
    int power_iterations = 4, oversample = 10;
    svd_cmd->add_option("--matrix", svd_in)->required();
    svd_cmd->add_option("--dim", svd_dim);
    svd_cmd->add_option("--seed", svd_seed);
    svd_cmd->add_option("--power-iterations", power_iterations);
    svd_cmd->add_option("--oversample", oversample);
    svd_cmd->add_option("--out", svd_out, "word2vec text output")->required();
    svd_cmd->add_option("--model-id", svd_id);

    // ---- ri ----
    auto* ri_cmd = app.add_subcommand("ri", "random indexing embeddings");
    std::string ri_corpus, ri_vocab, ri_out, ri_id;
    int ri_dim = 2000, ri_delta = 10, ri_window = 2;
    bool permute = false, dynamic_weighting = false;
    double theta = 10000.0;
    uint64_t ri_seed = 0;
    ri_cmd->add_option("--corpus", ri_corpus)->required();
    ri_cmd->add_option("--vocab", ri_vocab)->required();
    ri_cmd->add_option("--dim", ri_dim);
    ri_cmd->add_option("--delta", ri_delta, "nonzeros per index vector (even)");
    ri_cmd->add_option("--window", ri_window);
    ri_cmd->add_flag("--permute", permute, "encode neighbor side with permutations");
    ri_cmd->add_flag("--dynamic-weighting", dynamic_weighting);
    ri_cmd->add_option("--theta", theta, "dynamic weighting damping constant");
    ri_cmd->add_option("--seed", ri_seed);
    ri_cmd->add_option("--out", ri_out)->required();
    ri_cmd->add_option("--model-id", ri_id);

    // ---- pool ----
    auto* pool_cmd = app.add_subcommand("pool", "average token vectors into type vectors");
    std::string pool_in, pool_out, pool_id;
    pool_cmd->add_option("--tokens", pool_in, "token vector TSV")->required();
    pool_cmd->add_option("--out", pool_out)->required();
    pool_cmd->add_option("--model-id", pool_id);

    // ---- neighbors ----
    auto* nn_cmd = app.add_subcommand("neighbors", "nearest neighbors by cosine");
    std::string nn_space, nn_word;
    int nn_k = 10;
    nn_cmd->add_option("space", nn_space)->required();
    nn_cmd->add_option("word", nn_word)->required();
    nn_cmd->add_option("-k,--k", nn_k);

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "run the intrinsic task battery");
    std::string eval_space, eval_ledger, eval_id;
    std::vector<std::string> eval_suite;
    int restarts = 10;
    uint64_t eval_seed = 0;
    eval_cmd->add_option("space", eval_space)->required();
    eval_cmd->add_option("--suite", eval_suite, "dataset files or directories")->required();
    eval_cmd->add_option("--ledger", eval_ledger, "append JSON-lines results here");
    eval_cmd->add_option("--model-id", eval_id);
    eval_cmd->add_option("--restarts", restarts, "k-means restarts");
    eval_cmd->add_option("--seed", eval_seed);

    // ---- rsa ----
    auto* rsa_cmd = app.add_subcommand("rsa", "representational similarity analysis");
    std::vector<std::string> rsa_spaces;
    std::string rsa_vocab, rsa_scheme = "global", rsa_out, dump_rsms;
    int n_samples = -1, sample_size = 1000;
    int64_t high_top = 1000, mid_min = 500, low_min = 100;
    uint64_t rsa_seed = 0;
    rsa_cmd->add_option("--spaces", rsa_spaces)->required()->expected(2, -1);
    rsa_cmd->add_option("--vocab", rsa_vocab, "vocabulary with frequencies")->required();
    rsa_cmd->add_option("--scheme", rsa_scheme, "global|freq_high|freq_mid|freq_low|pos");
    rsa_cmd->add_option("--samples", n_samples, "number of disjoint samples");
    rsa_cmd->add_option("--size", sample_size, "words per sample");
    rsa_cmd->add_option("--high-top", high_top, "high-frequency stratum: top-N words");
    rsa_cmd->add_option("--mid-min-freq", mid_min);
    rsa_cmd->add_option("--low-min-freq", low_min);
    rsa_cmd->add_option("--seed", rsa_seed);
    rsa_cmd->add_option("--out", rsa_out, "report prefix (.csv + .jsonl)")->required();
    rsa_cmd->add_option("--dump-rsms", dump_rsms, "directory for per-sample RSM files");

    // ---- stats ----
    auto* stats_cmd = app.add_subcommand("stats", "rank conversion and tests over a ledger");
    std::string stats_ledger, factor = "model", stats_prefix;
    std::string wilcoxon_a, wilcoxon_b;
    stats_cmd->add_option("--ledger", stats_ledger);
    stats_cmd->add_option("--factor", factor, "model|context|dim");
    stats_cmd->add_option("--out-prefix", stats_prefix, "write CSV reports here");
    stats_cmd->add_option("--wilcoxon-a", wilcoxon_a, "numeric column file");
    stats_cmd->add_option("--wilcoxon-b", wilcoxon_b, "numeric column file");

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "best score and model per dataset");
    std::string report_ledger, report_out;
    report_cmd->add_option("--ledger", report_ledger)->required();
    report_cmd->add_option("--out", report_out, "markdown output (stdout otherwise)");

    // ---- grid ----
    auto* grid_cmd = app.add_subcommand("grid", "run a model x dataset evaluation grid");
    std::string grid_config, grid_ledger;
    int grid_threads = 0;
    uint64_t grid_seed_flag = 0;
    bool grid_seed_set = false;
    grid_cmd->add_option("--config", grid_config, "run config file")->required();
    grid_cmd->add_option("--ledger", grid_ledger, "override the config ledger path");
    grid_cmd->add_option("--threads", grid_threads);
    grid_cmd->add_option("--seed", grid_seed_flag)->each([&](const std::string&) {
        grid_seed_set = true;
    });

    CLI11_PARSE(app, argc, argv);
    dsm::WarningList warnings;

    if (*vocab_cmd) {
        auto reader = dsm::open_corpus(corpus_path);
        auto vocab = dsm::build_vocabulary(*reader, min_count);
        dsm::save_vocabulary(vocab, vocab_out);
        std::cout << "vocabulary: " << vocab.size() << " types, " << vocab.total_tokens
                  << " tokens\n";
    } else if (*sub_cmd) {
        auto vocab = dsm::load_vocabulary(sub_vocab);
        auto reader = dsm::open_corpus(sub_corpus);
        dsm::SubsampleReader sub(*reader, vocab, dsm::SubsampleConfig{threshold, sub_seed});
        auto kept = dsm::read_all(sub);
        bool conllu = sub_corpus.ends_with(".conllu") || sub_corpus.ends_with(".conll");
        if (conllu) {
            dsm::write_conllu(kept, sub_out);
        } else {
            dsm::write_plain(kept, sub_out);
        }
        std::cout << "kept " << sub.tokens_kept() << " of " << sub.tokens_seen()
                  << " tokens\n";
    } else if (*cooc_cmd) {
        auto vocab = dsm::load_vocabulary(cooc_vocab);
        auto reader = dsm::open_corpus(cooc_corpus);
        dsm::ContextSpec spec;
        spec.typed_min_freq = typed_min_freq;
        if (context == "dep-filtered") {
            spec.kind = dsm::ContextKind::DepFiltered;
        } else if (context == "dep-typed") {
            spec.kind = dsm::ContextKind::DepTyped;
        } else if (context == "document") {
            spec.kind = dsm::ContextKind::Document;
        } else if (context.rfind("window", 0) == 0 && context.size() > 6) {
            spec.kind = dsm::ContextKind::Window;
            try {
                spec.window_radius = std::stoi(context.substr(6));
            } catch (const std::exception&) {
                throw dsm::ConfigError("bad window radius in --context " + context);
            }
        } else {
            throw dsm::ConfigError("unknown --context value: " + context);
        }
        auto m = dsm::extract(*reader, vocab, spec);
        if (top_k > 0) m = dsm::prune_contexts(m, static_cast<size_t>(top_k));
        dsm::save_matrix(m, cooc_out);
        std::cout << "matrix: " << m.rows() << " x " << m.cols() << ", " << m.nnz()
                  << " nonzeros\n";
    } else if (*ppmi_cmd) {
        auto m = dsm::load_matrix(ppmi_in);
        auto w = dsm::ppmi(m, alpha);
        dsm::save_matrix(w, ppmi_out);
        std::cout << "ppmi: " << w.nnz() << " nonzeros (alpha=" << alpha << ")\n";
        if (!ppmi_vec.empty()) {
            dsm::RowMatrixXd dense = dsm::RowMatrixXd::Zero(w.rows(), w.cols());
            for (const auto& e : w.entries) dense(e.row, e.col) = e.value;
            dsm::EmbeddingSpace space(w.row_labels, std::move(dense));
            space.meta["model_id"] = ppmi_id.empty() ? "PPMI." + context_code(w) + "." +
                                                           std::to_string(w.cols())
                                                     : ppmi_id;
            space.meta["method"] = "ppmi-explicit";
            dsm::export_text(space, ppmi_vec);
        }
    } else if (*logent_cmd) {
        auto m = dsm::load_matrix(logent_in);
        auto w = dsm::log_entropy(m);
        dsm::save_matrix(w, logent_out);
        std::cout << "log-entropy: " << w.nnz() << " nonzeros\n";
        if (w.meta.count("single_document") > 0) {
            std::cerr << "warning: single-document corpus, global weights fixed at 1\n";
        }
    } else if (*svd_cmd) {
        auto m = dsm::load_matrix(svd_in);
        dsm::SvdOptions opts;
        opts.seed = svd_seed;
        opts.power_iterations = power_iterations;
        opts.oversample = oversample;
        auto space = dsm::svd_embeddings(m, svd_dim, opts, &warnings);
        std::string prefix = m.scheme == dsm::WeightScheme::LogEntropy ? "LSA" : "SVD";
        space.meta["model_id"] = svd_id.empty() ? prefix + "." + context_code(m) + "." +
                                                      std::to_string(svd_dim)
                                                : svd_id;
        dsm::export_text(space, svd_out);
        std::cout << "svd: " << space.size() << " x " << space.dim() << " -> " << svd_out
                  << "\n";
    } else if (*ri_cmd) {
        auto vocab = dsm::load_vocabulary(ri_vocab);
        auto idx = dsm::make_index_vectors(vocab, ri_dim, ri_delta, ri_seed);
        dsm::RiConfig cfg;
        cfg.window_radius = ri_window;
        cfg.permute = permute;
        cfg.dynamic_weighting = dynamic_weighting;
        cfg.weighting_theta = theta;
        auto reader = dsm::open_corpus(ri_corpus);
        auto space = dsm::train_ri(*reader, vocab, idx, cfg);
        space.meta["model_id"] =
            ri_id.empty() ? std::string(permute ? "RI-perm" : "RI") + ".w" +
                                std::to_string(ri_window) + "." + std::to_string(ri_dim)
                          : ri_id;
        dsm::export_text(space, ri_out);
        std::cout << "ri: " << space.size() << " x " << space.dim() << " -> " << ri_out
                  << "\n";
    } else if (*pool_cmd) {
        auto space = dsm::pool_tokens(pool_in, &warnings);
        if (!pool_id.empty()) space.meta["model_id"] = pool_id;
        dsm::export_text(space, pool_out);
        std::cout << "pooled " << space.size() << " type vectors\n";
    } else if (*nn_cmd) {
        auto space = load_space(nn_space, "");
        auto hits = dsm::nearest(space, space.vector_of(nn_word),
                                 static_cast<size_t>(nn_k), {nn_word});
        for (const auto& h : hits) {
            std::cout << h.rank << '\t' << h.word << '\t' << dsm::format_g9(h.score)
                      << '\n';
        }
    } else if (*eval_cmd) {
        auto space = load_space(eval_space, eval_id);
        auto files = suite_files(eval_suite);
        if (files.empty()) throw dsm::ConfigError("no dataset files in --suite");
        std::unique_ptr<dsm::LedgerWriter> writer;
        if (!eval_ledger.empty()) writer = std::make_unique<dsm::LedgerWriter>(eval_ledger);
        for (const auto& file : files) {
            auto ds = dsm::load_dataset(file);
            auto result = dsm::evaluate(space, ds, restarts, eval_seed, &warnings);
            auto record = dsm::LedgerRecord::from_eval(result);
            if (writer) writer->append(record);
            std::cout << record.model << '\t' << record.dataset << '\t' << record.metric
                      << '\t' << dsm::format_g9(record.score) << "\tcoverage="
                      << dsm::format_g9(record.coverage) << '\n';
        }
    } else if (*rsa_cmd) {
        auto vocab = dsm::load_vocabulary(rsa_vocab);
        dsm::SamplePlan plan =
            dsm::SamplePlan::defaults(dsm::sample_scheme_from_string(rsa_scheme));
        if (n_samples > 0) plan.n_samples = n_samples;
        plan.sample_size = sample_size;
        plan.high_top = high_top;
        plan.mid_min_freq = mid_min;
        plan.low_min_freq = low_min;
        plan.seed = rsa_seed;
        auto samples = dsm::sample_strata(vocab, plan, &warnings);

        std::vector<dsm::EmbeddingSpace> spaces;
        spaces.reserve(rsa_spaces.size());
        for (const auto& path : rsa_spaces) spaces.push_back(load_space(path, ""));
        // Report rows are keyed by model id; fall back to file stems when
        // two spaces carry the same id.
        {
            std::map<std::string, int> id_counts;
            for (const auto& s : spaces) ++id_counts[s.model_id()];
            for (size_t i = 0; i < spaces.size(); ++i) {
                if (id_counts[spaces[i].model_id()] > 1) {
                    spaces[i].meta["model_id"] = basename_stem(rsa_spaces[i]);
                }
            }
        }
        std::vector<const dsm::EmbeddingSpace*> pointers;
        for (const auto& s : spaces) pointers.push_back(&s);

        auto report = dsm::rsa_report(pointers, samples, &warnings);
        {
            std::ofstream csv(rsa_out + ".csv");
            csv << "# mean Spearman rho between similarity (cosine) RSMs, not "
                   "dissimilarity matrices\n";
            csv << "space";
            for (const auto& id : report.space_ids) csv << ',' << id;
            csv << '\n';
            for (size_t a = 0; a < report.space_ids.size(); ++a) {
                csv << report.space_ids[a];
                for (size_t b = 0; b < report.space_ids.size(); ++b) {
                    if (a == b) {
                        csv << ",1";
                    } else {
                        csv << ',' << dsm::format_g9(report.pair(a, b).mean);
                    }
                }
                csv << '\n';
            }
        }
        {
            std::ofstream jsonl(rsa_out + ".jsonl");
            for (const auto& pair : report.pairs) {
                for (size_t si = 0; si < pair.per_sample.size(); ++si) {
                    jsonl << "{\"space_a\":\"" << pair.space_a << "\",\"space_b\":\""
                          << pair.space_b << "\",\"sample\":\""
                          << report.sample_labels[si] << "\",\"rho\":"
                          << dsm::format_g9(pair.per_sample[si]) << "}\n";
                }
            }
        }
        if (!dump_rsms.empty()) {
            fs::create_directories(dump_rsms);
            for (const auto& sample : samples) {
                for (const auto* space : pointers) {
                    auto rsm = dsm::build_rsm(*space, sample.words, &warnings);
                    dsm::save_rsm(rsm, (fs::path(dump_rsms) /
                                        (rsm.space_id + "." + sample.label))
                                           .string());
                }
            }
        }
        for (const auto& pair : report.pairs) {
            std::cout << pair.space_a << " vs " << pair.space_b
                      << ": mean=" << dsm::format_g9(pair.mean)
                      << " median=" << dsm::format_g9(pair.median)
                      << " sd=" << dsm::format_g9(pair.sd) << '\n';
        }
    } else if (*stats_cmd) {
        if (!wilcoxon_a.empty() || !wilcoxon_b.empty()) {
            if (wilcoxon_a.empty() || wilcoxon_b.empty()) {
                throw dsm::ConfigError("--wilcoxon-a and --wilcoxon-b go together");
            }
            auto xs = read_numbers(wilcoxon_a);
            auto ys = read_numbers(wilcoxon_b);
            auto report = dsm::wilcoxon_signed_rank(xs, ys);
            std::cout << "Wilcoxon test: V = " << dsm::format_g9(report.statistic)
                      << ", p-value = " << dsm::format_g9(report.p_value) << '\n';
            return 0;
        }
        if (stats_ledger.empty()) throw dsm::ConfigError("--ledger is required");
        auto ledger = dsm::load_ledger(stats_ledger);
        auto table = dsm::rank_scores(ledger);

        // Rank observations pooled per factor level (ties averaged per
        // dataset, as in the rank-based analyses).
        std::map<std::string, std::vector<double>> by_level;
        for (const auto& [dataset, row] : table.ranks) {
            for (const auto& [model, rank] : row) {
                by_level[factor_of(model, factor)].push_back(rank);
            }
        }
        if (by_level.size() < 2) {
            throw dsm::InsufficientDataError("need >= 2 factor levels for the tests");
        }
        std::vector<std::string> levels;
        std::vector<std::vector<double>> groups;
        for (auto& [level, values] : by_level) {
            levels.push_back(level);
            groups.push_back(values);
        }
        auto kw = dsm::kruskal_wallis(groups);
        std::cout << "Kruskal-Wallis (" << factor << "): H = " << dsm::format_g9(kw.statistic)
                  << ", df = " << kw.df << ", p = " << dsm::format_g9(kw.p_value) << '\n';
        auto dunn = dsm::dunn_test(groups, dsm::Correction::Bonferroni, &warnings);
        std::cout << "Dunn pairwise (Bonferroni):\n";
        for (const auto& pair : dunn.pairwise) {
            std::cout << "  " << levels[pair.group_a] << " vs " << levels[pair.group_b]
                      << ": z = " << dsm::format_g9(pair.z)
                      << ", p = " << dsm::format_g9(pair.p_adjusted) << '\n';
        }
        // Lower-triangle significance matrix, filled dots at p < 0.05.
        std::map<std::pair<int, int>, bool> significant;
        for (const auto& pair : dunn.pairwise) {
            significant[{pair.group_b, pair.group_a}] = pair.p_adjusted < 0.05;
        }
        size_t width = 0;
        for (const auto& level : levels) width = std::max(width, level.size());
        std::cout << "significance matrix (● p < 0.05, ○ otherwise):\n";
        for (size_t r = 1; r < levels.size(); ++r) {
            std::cout << "  " << levels[r] << std::string(width - levels[r].size() + 2, ' ');
            for (size_t c = 0; c < r; ++c) {
                auto it = significant.find({static_cast<int>(r), static_cast<int>(c)});
                bool filled = it != significant.end() && it->second;
                std::cout << (filled ? "● " : "○ ");
            }
            std::cout << '\n';
        }
        if (!stats_prefix.empty()) {
            {
                std::ofstream ranks_csv(stats_prefix + "_ranks.csv");
                ranks_csv << "# rank 1 = best score within a dataset; ties get average ranks\n";
                ranks_csv << "dataset,model,rank\n";
                for (const auto& [dataset, row] : table.ranks) {
                    for (const auto& [model, rank] : row) {
                        ranks_csv << dataset << ',' << model << ','
                                  << dsm::format_g9(rank) << '\n';
                    }
                }
            }
            {
                std::ofstream dunn_csv(stats_prefix + "_dunn.csv");
                dunn_csv << "a,b,z,p_raw,p_bonferroni,significant\n";
                for (const auto& pair : dunn.pairwise) {
                    dunn_csv << levels[pair.group_a] << ',' << levels[pair.group_b] << ','
                             << dsm::format_g9(pair.z) << ',' << dsm::format_g9(pair.p_raw)
                             << ',' << dsm::format_g9(pair.p_adjusted) << ','
                             << (pair.p_adjusted < 0.05 ? "yes" : "no") << '\n';
                }
            }
            {
                auto corr = dsm::dataset_correlation(ledger);
                std::ofstream corr_csv(stats_prefix + "_dataset_corr.csv");
                corr_csv << "dataset";
                for (const auto& d : corr.datasets) corr_csv << ',' << d;
                corr_csv << '\n';
                for (size_t i = 0; i < corr.datasets.size(); ++i) {
                    corr_csv << corr.datasets[i];
                    for (size_t j = 0; j < corr.datasets.size(); ++j) {
                        if (std::isnan(corr.rho(i, j))) {
                            corr_csv << ",";
                        } else {
                            corr_csv << ',' << dsm::format_g9(corr.rho(i, j));
                        }
                    }
                    corr_csv << '\n';
                }
            }
        }
    } else if (*report_cmd) {
        auto ledger = dsm::load_ledger(report_ledger);
        auto rows = dsm::best_report(ledger);
        std::ostringstream md;
        md << "| dataset | best score | model |\n|---|---|---|\n";
        for (const auto& row : rows) {
            md << "| " << row.dataset << " | " << dsm::format_g9(row.score) << " | ";
            for (size_t i = 0; i < row.models.size(); ++i) {
                if (i > 0) md << ", ";
                md << row.models[i];
            }
            md << " |\n";
        }
        if (report_out.empty()) {
            std::cout << md.str();
        } else {
            std::ofstream out(report_out);
            out << md.str();
            std::cout << "wrote " << rows.size() << " rows to " << report_out << '\n';
        }
    } else if (*grid_cmd) {
        auto config = dsm::load_run_config(grid_config);
        if (!grid_ledger.empty()) config.ledger_path = grid_ledger;
        if (grid_threads > 0) config.threads = grid_threads;
        if (grid_seed_set) config.seed = grid_seed_flag;
        auto outcome = dsm::run_grid(config, &warnings);
        std::cout << "grid: " << outcome.executed << " executed, " << outcome.skipped
                  << " skipped, " << outcome.failed << " failed; ledger has "
                  << outcome.ledger.size() << " rows\n";
    }

    print_warnings(warnings);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
