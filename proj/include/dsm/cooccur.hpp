#pragma once

// Sparse target x context co-occurrence extraction under the four context
// regimes: undirected windows, dependency-filtered / dependency-typed
// collocates, and documents.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsm/corpus.hpp"

namespace dsm {

enum class ContextKind : uint8_t { Window, DepFiltered, DepTyped, Document };

std::string to_string(ContextKind kind);

struct ContextSpec {
    ContextKind kind = ContextKind::Window;
    int window_radius = 2;        // window kind only
    int64_t typed_min_freq = 500; // dep_typed: contexts with freq <= this are dropped
    bool direction_sensitive = false;  // windows are undirected
};

// Inverse-arc typed contexts are written "rel-inv-word" (the superscript -1
// glyph is not file-safe).
std::string typed_context_label(const std::string& rel, const std::string& word,
                                bool inverse);

struct CoocEntry {
    uint32_t row = 0;
    uint32_t col = 0;
    double value = 0.0;
};

enum class WeightScheme : uint8_t { Raw, Ppmi, LogEntropy };

std::string to_string(WeightScheme scheme);

// Finalized coordinate-form matrix: entries sorted by (row, col), no
// duplicates, marginals cached.
struct SparseCooccurrenceMatrix {
    std::vector<std::string> row_labels;  // target words, vocab id order
    std::vector<std::string> col_labels;  // context catalog
    std::unordered_map<std::string, uint32_t> col_ids;
    std::vector<CoocEntry> entries;
    std::vector<double> row_marginals;
    std::vector<double> col_marginals;
    double grand_total = 0.0;
    ContextKind kind = ContextKind::Window;
    WeightScheme scheme = WeightScheme::Raw;
    std::map<std::string, std::string> meta;  // free-form provenance flags

    size_t rows() const { return row_labels.size(); }
    size_t cols() const { return col_labels.size(); }
    size_t nnz() const { return entries.size(); }

    // Recomputes marginals from the entries (used after reweighting and by
    // the invariant checks).
    void recompute_marginals();
    double value_at(uint32_t row, uint32_t col) const;  // 0 when absent
};

// Accumulator used by the extractors; merge() makes sharded extraction a
// plain sum. finalize() sorts coordinates and fills marginals.
class CoocBuilder {
  public:
    CoocBuilder(std::vector<std::string> row_labels, ContextKind kind);

    uint32_t context_id(const std::string& label);  // interns a context label
    void add(uint32_t row, uint32_t col, double value);
    void merge(const CoocBuilder& other);
    SparseCooccurrenceMatrix finalize() &&;

  private:
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    std::unordered_map<std::string, uint32_t> col_ids_;
    std::unordered_map<uint64_t, double> cells_;
    ContextKind kind_;
};

// Undirected window counts; windows never cross sentence boundaries and
// tokens outside the vocabulary are skipped without shrinking distances.
SparseCooccurrenceMatrix extract_window(SentenceReader& stream,
                                        const Vocabulary& vocab,
                                        const ContextSpec& spec);

// Dependency collocates from basic arcs. Filtered: (head, dep) and
// (dep, head). Typed: (head, "rel-dep") and (dep, "rel-inv-head"); typed
// contexts with accumulated frequency <= typed_min_freq are dropped.
// Arcs touching out-of-vocabulary words are skipped.
SparseCooccurrenceMatrix extract_dependency(SentenceReader& stream,
                                            const Vocabulary& vocab,
                                            const ContextSpec& spec);

// (word, document) counts; contexts are document ids in order of appearance.
SparseCooccurrenceMatrix extract_document(SentenceReader& stream,
                                          const Vocabulary& vocab);

SparseCooccurrenceMatrix extract(SentenceReader& stream, const Vocabulary& vocab,
                                 const ContextSpec& spec);

// Keeps the top_k contexts by column marginal (ties lexicographic by
// label); rows unchanged, marginals recomputed. top_k >= |C| is identity.
SparseCooccurrenceMatrix prune_contexts(const SparseCooccurrenceMatrix& m,
                                        size_t top_k);

// Matrix file: header "#rows=<n> cols=<m> kind=<k>[ scheme=<s>]", then TSV
// triples target<TAB>context<TAB>value. A companion catalog at
// <path>.contexts fixes the context id order.
void save_matrix(const SparseCooccurrenceMatrix& m, const std::string& path);
SparseCooccurrenceMatrix load_matrix(const std::string& path);

}  // namespace dsm
