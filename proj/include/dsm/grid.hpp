#pragma once

// Model x dataset evaluation grid with an append-only ledger and
// idempotent resume.

#include <string>
#include <vector>

#include "dsm/ledger.hpp"

namespace dsm {

struct GridModel {
    std::string id;    // e.g. "SVD.w2.300"
    std::string path;  // word2vec text file
};

struct RunConfig {
    std::vector<GridModel> models;
    std::vector<std::string> dataset_paths;
    std::string ledger_path;
    int threads = 1;          // DSM_THREADS caps this
    int kmeans_restarts = 10;
    uint64_t seed = 0;

    // Resolved key=value view of this config; embedded in every run record
    // together with a content hash of the inputs.
    std::map<std::string, std::string> resolved() const;
    uint64_t inputs_hash() const;  // FNV-1a over the referenced files
};

// Loads "key=value" lines: model.<id>=<path>, dataset=<path> (repeatable),
// ledger=<path>, threads=<n>, restarts=<n>, seed=<n>. '#' starts a comment.
RunConfig load_run_config(const std::string& path);

struct GridOutcome {
    int executed = 0;   // jobs run in this invocation
    int skipped = 0;    // jobs already present in the ledger
    int failed = 0;     // jobs recorded with an error
    Ledger ledger;      // full ledger content after the run
};

// Runs the model x dataset cross product. (model, dataset) pairs already in
// the ledger are skipped, making interrupted runs resumable without
// duplicate rows; failures are recorded and the grid continues.
GridOutcome run_grid(const RunConfig& config, WarningList* warnings = nullptr);

// Bounded by the DSM_THREADS environment variable when set.
int effective_threads(int requested);

}  // namespace dsm
