#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsm/corpus.hpp"

namespace testutil {

// Sentences from "a b c / d e" style strings; '/' separates sentences,
// '|' bumps the document id.
inline std::vector<dsm::Sentence> sentences(const std::string& text) {
    std::vector<dsm::Sentence> out;
    dsm::Sentence current;
    int64_t doc = 0;
    std::istringstream iss(text);
    std::string tok;
    auto flush = [&]() {
        if (!current.tokens.empty()) {
            current.doc_id = doc;
            out.push_back(current);
            current = dsm::Sentence{};
        }
    };
    while (iss >> tok) {
        if (tok == "/") {
            flush();
        } else if (tok == "|") {
            flush();
            ++doc;
        } else {
            current.tokens.push_back(tok);
        }
    }
    flush();
    return out;
}

inline dsm::Vocabulary vocab_of(const std::vector<dsm::Sentence>& corpus,
                                int64_t min_count = 1) {
    dsm::VectorReader reader(corpus);
    return dsm::build_vocabulary(reader, min_count);
}

// Unique scratch directory, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("dsm_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testutil
