#pragma once

// Corpus ingestion: plain and CoNLL-U readers, vocabulary construction,
// frequency subsampling.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsm/common.hpp"

namespace dsm {

using WordId = uint32_t;
constexpr WordId kNoWord = static_cast<WordId>(-1);

enum class PosTag : uint8_t { Noun, Verb, Adjective, Other };

std::string to_string(PosTag tag);
PosTag pos_tag_from_string(std::string_view s);

struct DepArc {
    int32_t head = 0;  // token index within the sentence
    int32_t dep = 0;
    std::string rel;   // bare UD relation label, e.g. "nsubj"
};

struct Sentence {
    std::vector<std::string> tokens;
    std::vector<DepArc> deps;       // empty for unparsed corpora
    std::vector<PosTag> pos;        // empty for untagged corpora
    int64_t doc_id = 0;
};

// Single-pass sentence producer. Readers are cheap to recreate, so multi-pass
// pipelines simply open a fresh reader per pass.
class SentenceReader {
  public:
    virtual ~SentenceReader() = default;
    // Fills `out` and returns true, or returns false at end of stream.
    virtual bool next(Sentence& out) = 0;
};

// Plain corpus format: one sentence per line, whitespace-separated tokens,
// blank line = document boundary. Tokens are case-folded.
class PlainTextReader : public SentenceReader {
  public:
    explicit PlainTextReader(const std::string& path);
    ~PlainTextReader() override;
    bool next(Sentence& out) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// CoNLL-U reader. Keeps basic dependency arcs; multiword-token and
// empty-node lines are skipped; `# newdoc` comments delimit documents.
// Tokens are case-folded; UPOS collapses to noun/verb/adjective/other.
class ConlluReader : public SentenceReader {
  public:
    explicit ConlluReader(const std::string& path);
    ~ConlluReader() override;
    bool next(Sentence& out) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// In-memory corpus, mainly for tests and the Python bindings.
class VectorReader : public SentenceReader {
  public:
    explicit VectorReader(std::vector<Sentence> sentences)
        : sentences_(std::move(sentences)) {}
    bool next(Sentence& out) override {
        if (pos_ >= sentences_.size()) return false;
        out = sentences_[pos_++];
        return true;
    }

  private:
    std::vector<Sentence> sentences_;
    size_t pos_ = 0;
};

std::vector<Sentence> read_all(SentenceReader& reader);

// Opens a corpus by extension: .conllu / .conll -> ConlluReader, anything
// else -> PlainTextReader.
std::unique_ptr<SentenceReader> open_corpus(const std::string& path);

struct Vocabulary {
    std::vector<std::string> words;               // id -> surface form
    std::unordered_map<std::string, WordId> ids;  // surface form -> id
    std::vector<int64_t> freq;                    // id -> corpus count
    int64_t total_tokens = 0;                     // full stream length
    std::vector<PosTag> pos_tag;                  // empty when corpus untagged

    size_t size() const { return words.size(); }
    bool has_pos() const { return !pos_tag.empty(); }

    std::optional<WordId> id_of(std::string_view word) const {
        auto it = ids.find(std::string(word));
        return it == ids.end() ? std::nullopt : std::optional<WordId>(it->second);
    }
    double relative_freq(WordId id) const {
        return total_tokens > 0
                   ? static_cast<double>(freq[id]) / static_cast<double>(total_tokens)
                   : 0.0;
    }
};

// Counts the stream and keeps words with frequency >= min_count. Ids are
// assigned by descending frequency, ties broken lexicographically;
// total_tokens counts the full stream including pruned words. When the
// stream carries POS tags, a word gets a noun/verb/adjective tag iff at
// least `pos_majority` of its occurrences carry that tag, else Other.
Vocabulary build_vocabulary(SentenceReader& stream, int64_t min_count,
                            double pos_majority = 0.9);

struct SubsampleConfig {
    double threshold_t = 1e-5;
    uint64_t seed = 0;
};

// Removes each occurrence of word l with probability 1 - sqrt(t / F(l))
// when its relative frequency F(l) >= t; rarer words always pass through.
// Gaps close (neighbors become adjacent) and dependency arcs incident to a
// removed token are dropped, with the remaining arc indices remapped.
// The decision for the k-th occurrence of a word depends only on
// (seed, word id, k), so sharded runs reproduce the sequential stream.
class SubsampleReader : public SentenceReader {
  public:
    SubsampleReader(SentenceReader& inner, const Vocabulary& vocab,
                    SubsampleConfig cfg);
    bool next(Sentence& out) override;

    int64_t tokens_seen() const { return tokens_seen_; }
    int64_t tokens_kept() const { return tokens_kept_; }

  private:
    SentenceReader& inner_;
    const Vocabulary& vocab_;
    SubsampleConfig cfg_;
    std::vector<int64_t> occurrence_;  // per word id occurrence counter
    int64_t tokens_seen_ = 0;
    int64_t tokens_kept_ = 0;
};

std::vector<Sentence> subsample(SentenceReader& stream, const Vocabulary& vocab,
                                SubsampleConfig cfg);

// Vocabulary file: header "#total_tokens=N", then one "word<TAB>freq[<TAB>pos]"
// line per id, in id order.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// Plain / CoNLL-U writers for subsampled corpora. The CoNLL-U writer emits
// the minimal columns this toolkit reads back (FORM, UPOS, HEAD, DEPREL).
void write_plain(const std::vector<Sentence>& sentences, std::ostream& out);
void write_plain(const std::vector<Sentence>& sentences, const std::string& path);
void write_conllu(const std::vector<Sentence>& sentences, std::ostream& out);
void write_conllu(const std::vector<Sentence>& sentences, const std::string& path);

}  // namespace dsm
