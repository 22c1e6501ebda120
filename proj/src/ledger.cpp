#include "dsm/ledger.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace dsm {

using nlohmann::json;

LedgerRecord LedgerRecord::from_eval(const EvalResult& r) {
    LedgerRecord record;
    record.model = r.model_id;
    record.dataset = r.dataset;
    record.task = to_string(r.task);
    record.metric = r.metric;
    record.score = r.score;
    record.coverage = r.coverage;
    return record;
}

std::string to_json_line(const LedgerRecord& record) {
    json j;
    j["model"] = record.model;
    j["dataset"] = record.dataset;
    j["task"] = record.task;
    j["metric"] = record.metric;
    if (record.error.has_value()) {
        j["score"] = nullptr;
        j["error"] = *record.error;
    } else {
        j["score"] = record.score;
    }
    j["coverage"] = record.coverage;
    if (!record.run.empty()) j["run"] = record.run;
    return j.dump();
}

LedgerRecord record_from_json_line(const std::string& line) {
    json j = json::parse(line);
    LedgerRecord record;
    record.model = j.at("model").get<std::string>();
    record.dataset = j.at("dataset").get<std::string>();
    record.task = j.value("task", "");
    record.metric = j.value("metric", "");
    if (j.contains("score") && !j["score"].is_null()) {
        record.score = j["score"].get<double>();
    } else {
        record.score = std::numeric_limits<double>::quiet_NaN();
    }
    record.coverage = j.value("coverage", 0.0);
    if (j.contains("error")) record.error = j["error"].get<std::string>();
    if (j.contains("run")) {
        for (auto& [key, value] : j["run"].items()) {
            record.run[key] = value.get<std::string>();
        }
    }
    return record;
}

Ledger load_ledger(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ledger: " + path);
    Ledger ledger;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            ledger.push_back(record_from_json_line(line));
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return ledger;
}

Ledger load_ledger_if_exists(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) return {};
    probe.close();
    return load_ledger(path);
}

struct LedgerWriter::Impl {
    std::ofstream out;
};

LedgerWriter::LedgerWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::app);
    if (!impl_->out) {
        delete impl_;
        throw Error("cannot open ledger for append: " + path);
    }
}

LedgerWriter::~LedgerWriter() { delete impl_; }

void LedgerWriter::append(const LedgerRecord& record) {
    impl_->out << to_json_line(record) << '\n';
    impl_->out.flush();
}

}  // namespace dsm
