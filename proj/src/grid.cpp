#include "dsm/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace dsm {

std::map<std::string, std::string> RunConfig::resolved() const {
    std::map<std::string, std::string> out;
    for (const auto& m : models) out["model." + m.id] = m.path;
    for (size_t i = 0; i < dataset_paths.size(); ++i) {
        out["dataset." + std::to_string(i)] = dataset_paths[i];
    }
    out["ledger"] = ledger_path;
    out["threads"] = std::to_string(threads);
    out["restarts"] = std::to_string(kmeans_restarts);
    out["seed"] = std::to_string(seed);
    return out;
}

uint64_t RunConfig::inputs_hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto hash_file = [&h](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return;  // missing inputs surface later as job errors
        char buf[1 << 16];
        while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
            h = fnv1a(std::string_view(buf, static_cast<size_t>(in.gcount())), h);
        }
    };
    for (const auto& m : models) hash_file(m.path);
    for (const auto& d : dataset_paths) hash_file(d);
    return h;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run config: " + path);
    RunConfig config;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (starts_with(key, "model.")) {
            config.models.push_back(GridModel{key.substr(6), value});
        } else if (key == "dataset") {
            config.dataset_paths.push_back(value);
        } else if (key == "ledger") {
            config.ledger_path = value;
        } else if (key == "threads") {
            config.threads = std::stoi(value);
        } else if (key == "restarts") {
            config.kmeans_restarts = std::stoi(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else {
            throw ParseError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                             key + "'");
        }
    }
    return config;
}

int effective_threads(int requested) {
    int limit = requested > 0 ? requested : 1;
    if (const char* env = std::getenv("DSM_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) limit = std::min(limit, cap);
    }
    return limit;
}

GridOutcome run_grid(const RunConfig& config, WarningList* warnings) {
    if (config.models.empty() || config.dataset_paths.empty()) {
        throw ConfigError("grid needs at least one model and one dataset");
    }
    if (config.ledger_path.empty()) throw ConfigError("grid needs a ledger path");

    Ledger existing = load_ledger_if_exists(config.ledger_path);
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& record : existing) done.emplace(record.model, record.dataset);

    struct Job {
        const GridModel* model;
        const std::string* dataset_path;
    };
    std::vector<Job> jobs;
    GridOutcome outcome;
    // Dataset names come from the file headers; loading failures are
    // recorded once per (model, dataset-path) job below.
    for (const auto& model : config.models) {
        for (const auto& dataset_path : config.dataset_paths) {
            jobs.push_back(Job{&model, &dataset_path});
        }
    }

    std::map<std::string, std::string> run_info;
    {
        std::ostringstream hex;
        hex << std::hex << config.inputs_hash();
        run_info["inputs_hash"] = hex.str();
        uint64_t ch = 0xcbf29ce484222325ULL;
        for (const auto& [key, value] : config.resolved()) {
            ch = fnv1a(key + "=" + value + "\n", ch);
        }
        std::ostringstream chex;
        chex << std::hex << ch;
        run_info["config_hash"] = chex.str();
    }

    LedgerWriter writer(config.ledger_path);
    std::mutex writer_mutex;
    std::mutex state_mutex;
    // Spaces load once per model and are shared read-only by the workers.
    std::map<std::string, std::shared_ptr<const EmbeddingSpace>> space_cache;

    auto load_space = [&](const GridModel& model) {
        {
            std::lock_guard<std::mutex> lock(state_mutex);
            auto it = space_cache.find(model.id);
            if (it != space_cache.end()) return it->second;
        }
        auto space = std::make_shared<EmbeddingSpace>(import_text(model.path));
        space->meta["model_id"] = model.id;
        std::lock_guard<std::mutex> lock(state_mutex);
        return space_cache.emplace(model.id, std::move(space)).first->second;
    };

    std::atomic<size_t> next_job{0};
    std::mutex outcome_mutex;
    auto worker = [&]() {
        while (true) {
            size_t index = next_job.fetch_add(1);
            if (index >= jobs.size()) return;
            const Job& job = jobs[index];
            LedgerRecord record;
            record.model = job.model->id;
            record.run = run_info;
            bool known_done = false;
            try {
                BenchmarkDataset dataset = load_dataset(*job.dataset_path);
                record.dataset = dataset.name;
                {
                    std::lock_guard<std::mutex> lock(state_mutex);
                    known_done = done.count({record.model, record.dataset}) > 0;
                }
                if (known_done) {
                    std::lock_guard<std::mutex> lock(outcome_mutex);
                    ++outcome.skipped;
                    continue;
                }
                auto space = load_space(*job.model);
                EvalResult result = evaluate(*space, dataset, config.kmeans_restarts,
                                             config.seed, warnings);
                record.task = to_string(result.task);
                record.metric = result.metric;
                record.score = result.score;
                record.coverage = result.coverage;
            } catch (const std::exception& e) {
                if (record.dataset.empty()) record.dataset = *job.dataset_path;
                record.error = e.what();
            }
            {
                std::lock_guard<std::mutex> lock(writer_mutex);
                writer.append(record);
            }
            std::lock_guard<std::mutex> lock(outcome_mutex);
            ++outcome.executed;
            if (record.error.has_value()) ++outcome.failed;
        }
    };

    int threads = effective_threads(config.threads);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Run manifest: resolved config + input hash, append-only like the ledger.
    {
        std::ofstream manifest(config.ledger_path + ".runs", std::ios::app);
        if (manifest) {
            manifest << "run inputs_hash=" << run_info["inputs_hash"]
                     << " config_hash=" << run_info["config_hash"]
                     << " executed=" << outcome.executed << '\n';
            for (const auto& [key, value] : config.resolved()) {
                manifest << "  " << key << '=' << value << '\n';
            }
        }
    }
    outcome.ledger = load_ledger(config.ledger_path);
    return outcome;
}

}  // namespace dsm
