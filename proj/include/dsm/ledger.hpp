#pragma once

// JSON-lines results ledger shared by the evaluators, the grid driver, and
// the statistics module.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsm/evalsuite.hpp"

namespace dsm {

struct LedgerRecord {
    std::string model;
    std::string dataset;
    std::string task;
    std::string metric;
    double score = 0.0;        // NaN for failed jobs
    double coverage = 0.0;
    std::optional<std::string> error;  // set for failed grid jobs
    std::map<std::string, std::string> run;  // resolved config / input hashes

    bool ok() const { return !error.has_value(); }
    static LedgerRecord from_eval(const EvalResult& r);
};

using Ledger = std::vector<LedgerRecord>;

std::string to_json_line(const LedgerRecord& record);
LedgerRecord record_from_json_line(const std::string& line);

Ledger load_ledger(const std::string& path);             // throws if unreadable
Ledger load_ledger_if_exists(const std::string& path);   // empty when absent

// Append-only writer; each append is flushed so interrupted runs resume
// cleanly.
class LedgerWriter {
  public:
    explicit LedgerWriter(const std::string& path);
    ~LedgerWriter();
    void append(const LedgerRecord& record);

  private:
    struct Impl;
    Impl* impl_;
};

}  // namespace dsm
