#include "dsm/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace dsm {

std::string to_string(ContextKind kind) {
    switch (kind) {
        case ContextKind::Window: return "window";
        case ContextKind::DepFiltered: return "dep-filtered";
        case ContextKind::DepTyped: return "dep-typed";
        case ContextKind::Document: return "document";
    }
    return "window";
}

std::string to_string(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::Raw: return "raw";
        case WeightScheme::Ppmi: return "ppmi";
        case WeightScheme::LogEntropy: return "log_entropy";
    }
    return "raw";
}

std::string typed_context_label(const std::string& rel, const std::string& word,
                                bool inverse) {
    return inverse ? rel + "-inv-" + word : rel + "-" + word;
}

void SparseCooccurrenceMatrix::recompute_marginals() {
    row_marginals.assign(rows(), 0.0);
    col_marginals.assign(cols(), 0.0);
    grand_total = 0.0;
    for (const auto& e : entries) {
        row_marginals[e.row] += e.value;
        col_marginals[e.col] += e.value;
        grand_total += e.value;
    }
}

double SparseCooccurrenceMatrix::value_at(uint32_t row, uint32_t col) const {
    auto it = std::lower_bound(entries.begin(), entries.end(),
                               std::pair<uint32_t, uint32_t>(row, col),
                               [](const CoocEntry& e, const std::pair<uint32_t, uint32_t>& k) {
                                   return e.row != k.first ? e.row < k.first
                                                           : e.col < k.second;
                               });
    if (it != entries.end() && it->row == row && it->col == col) return it->value;
    return 0.0;
}

CoocBuilder::CoocBuilder(std::vector<std::string> row_labels, ContextKind kind)
    : row_labels_(std::move(row_labels)), kind_(kind) {}

uint32_t CoocBuilder::context_id(const std::string& label) {
    auto it = col_ids_.find(label);
    if (it != col_ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(col_labels_.size());
    col_ids_.emplace(label, id);
    col_labels_.push_back(label);
    return id;
}

void CoocBuilder::add(uint32_t row, uint32_t col, double value) {
    cells_[(static_cast<uint64_t>(row) << 32) | col] += value;
}

void CoocBuilder::merge(const CoocBuilder& other) {
    for (const auto& [key, value] : other.cells_) {
        uint32_t col = static_cast<uint32_t>(key & 0xffffffffULL);
        uint32_t row = static_cast<uint32_t>(key >> 32);
        uint32_t my_col = context_id(other.col_labels_[col]);
        cells_[(static_cast<uint64_t>(row) << 32) | my_col] += value;
    }
}

SparseCooccurrenceMatrix CoocBuilder::finalize() && {
    SparseCooccurrenceMatrix m;
    m.kind = kind_;
    m.row_labels = std::move(row_labels_);
    m.col_labels = std::move(col_labels_);
    m.col_ids = std::move(col_ids_);
    m.entries.reserve(cells_.size());
    for (const auto& [key, value] : cells_) {
        m.entries.push_back(CoocEntry{static_cast<uint32_t>(key >> 32),
                                      static_cast<uint32_t>(key & 0xffffffffULL),
                                      value});
    }
    std::sort(m.entries.begin(), m.entries.end(), [](const CoocEntry& a, const CoocEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.recompute_marginals();
    return m;
}

SparseCooccurrenceMatrix extract_window(SentenceReader& stream,
                                        const Vocabulary& vocab,
                                        const ContextSpec& spec) {
    if (spec.kind != ContextKind::Window) throw ConfigError("extract_window needs kind=window");
    if (spec.window_radius < 1) throw ConfigError("window_radius must be >= 1");

    CoocBuilder builder(vocab.words, ContextKind::Window);
    // Context catalog = vocabulary, in id order, registered up front so that
    // column ids match word ids.
    for (const auto& w : vocab.words) builder.context_id(w);

    const int64_t radius = spec.window_radius;
    Sentence s;
    std::vector<WordId> ids;
    while (stream.next(s)) {
        ids.clear();
        for (const auto& tok : s.tokens) {
            auto id = vocab.id_of(tok);
            ids.push_back(id ? *id : kNoWord);
        }
        const int64_t n = static_cast<int64_t>(ids.size());
        for (int64_t i = 0; i < n; ++i) {
            if (ids[i] == kNoWord) continue;
            int64_t lo = std::max<int64_t>(0, i - radius);
            int64_t hi = std::min<int64_t>(n - 1, i + radius);
            for (int64_t j = lo; j <= hi; ++j) {
                if (j == i || ids[j] == kNoWord) continue;
                builder.add(ids[i], ids[j], 1.0);
            }
        }
    }
    auto m = std::move(builder).finalize();
    m.meta["window_radius"] = std::to_string(spec.window_radius);
    return m;
}

SparseCooccurrenceMatrix extract_dependency(SentenceReader& stream,
                                            const Vocabulary& vocab,
                                            const ContextSpec& spec) {
    if (spec.kind != ContextKind::DepFiltered && spec.kind != ContextKind::DepTyped) {
        throw ConfigError("extract_dependency needs kind=dep-filtered or dep-typed");
    }
    const bool typed = spec.kind == ContextKind::DepTyped;
    CoocBuilder builder(vocab.words, spec.kind);
    if (!typed) {
        for (const auto& w : vocab.words) builder.context_id(w);
    }

    Sentence s;
    while (stream.next(s)) {
        for (const auto& arc : s.deps) {
            auto head = vocab.id_of(s.tokens[arc.head]);
            auto dep = vocab.id_of(s.tokens[arc.dep]);
            if (!head || !dep) continue;
            if (typed) {
                builder.add(*head,
                            builder.context_id(typed_context_label(
                                arc.rel, s.tokens[arc.dep], false)),
                            1.0);
                builder.add(*dep,
                            builder.context_id(typed_context_label(
                                arc.rel, s.tokens[arc.head], true)),
                            1.0);
            } else {
                builder.add(*head, *dep, 1.0);
                builder.add(*dep, *head, 1.0);
            }
        }
    }
    auto m = std::move(builder).finalize();
    if (typed && spec.typed_min_freq > 0) {
        // Drop typed contexts whose accumulated frequency is <= the
        // threshold; column ids are re-packed.
        std::vector<uint32_t> keep_map(m.cols(), UINT32_MAX);
        std::vector<std::string> kept_labels;
        for (uint32_t c = 0; c < m.cols(); ++c) {
            if (m.col_marginals[c] > static_cast<double>(spec.typed_min_freq)) {
                keep_map[c] = static_cast<uint32_t>(kept_labels.size());
                kept_labels.push_back(m.col_labels[c]);
            }
        }
        SparseCooccurrenceMatrix pruned;
        pruned.kind = m.kind;
        pruned.row_labels = std::move(m.row_labels);
        pruned.col_labels = std::move(kept_labels);
        for (uint32_t c = 0; c < pruned.col_labels.size(); ++c) {
            pruned.col_ids.emplace(pruned.col_labels[c], c);
        }
        for (const auto& e : m.entries) {
            if (keep_map[e.col] != UINT32_MAX) {
                pruned.entries.push_back(CoocEntry{e.row, keep_map[e.col], e.value});
            }
        }
        pruned.recompute_marginals();
        pruned.meta["typed_min_freq"] = std::to_string(spec.typed_min_freq);
        return pruned;
    }
    return m;
}

SparseCooccurrenceMatrix extract_document(SentenceReader& stream,
                                          const Vocabulary& vocab) {
    CoocBuilder builder(vocab.words, ContextKind::Document);
    Sentence s;
    while (stream.next(s)) {
        uint32_t doc_col = builder.context_id("d" + std::to_string(s.doc_id));
        for (const auto& tok : s.tokens) {
            if (auto id = vocab.id_of(tok)) builder.add(*id, doc_col, 1.0);
        }
    }
    return std::move(builder).finalize();
}

SparseCooccurrenceMatrix extract(SentenceReader& stream, const Vocabulary& vocab,
                                 const ContextSpec& spec) {
    switch (spec.kind) {
        case ContextKind::Window: return extract_window(stream, vocab, spec);
        case ContextKind::DepFiltered:
        case ContextKind::DepTyped: return extract_dependency(stream, vocab, spec);
        case ContextKind::Document: return extract_document(stream, vocab);
    }
    throw ConfigError("unknown context kind");
}

SparseCooccurrenceMatrix prune_contexts(const SparseCooccurrenceMatrix& m,
                                        size_t top_k) {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (top_k >= m.cols()) return m;

    std::vector<uint32_t> order(m.cols());
    for (uint32_t c = 0; c < m.cols(); ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (m.col_marginals[a] != m.col_marginals[b]) {
            return m.col_marginals[a] > m.col_marginals[b];
        }
        return m.col_labels[a] < m.col_labels[b];
    });
    order.resize(top_k);

    std::vector<uint32_t> keep_map(m.cols(), UINT32_MAX);
    SparseCooccurrenceMatrix out;
    out.kind = m.kind;
    out.scheme = m.scheme;
    out.meta = m.meta;
    out.row_labels = m.row_labels;
    // Kept columns preserve their original relative order.
    std::sort(order.begin(), order.end());
    for (uint32_t c : order) {
        keep_map[c] = static_cast<uint32_t>(out.col_labels.size());
        out.col_ids.emplace(m.col_labels[c], static_cast<uint32_t>(out.col_labels.size()));
        out.col_labels.push_back(m.col_labels[c]);
    }
    for (const auto& e : m.entries) {
        if (keep_map[e.col] != UINT32_MAX) {
            out.entries.push_back(CoocEntry{e.row, keep_map[e.col], e.value});
        }
    }
    out.recompute_marginals();
    out.meta["pruned_top_k"] = std::to_string(top_k);
    return out;
}

// ---------------------------------------------------------------------------
// File I/O

namespace {

std::string kind_token(const SparseCooccurrenceMatrix& m) {
    if (m.kind == ContextKind::Window) {
        auto it = m.meta.find("window_radius");
        return "window" + (it != m.meta.end() ? it->second : std::string());
    }
    return to_string(m.kind);
}

ContextKind kind_from_token(const std::string& token, int* radius) {
    if (starts_with(token, "window")) {
        if (radius != nullptr && token.size() > 6) *radius = std::stoi(token.substr(6));
        return ContextKind::Window;
    }
    if (token == "dep-filtered") return ContextKind::DepFiltered;
    if (token == "dep-typed") return ContextKind::DepTyped;
    if (token == "document") return ContextKind::Document;
    throw FormatError("unknown context kind token: " + token);
}

WeightScheme scheme_from_token(const std::string& token) {
    if (token == "raw") return WeightScheme::Raw;
    if (token == "ppmi") return WeightScheme::Ppmi;
    if (token == "log_entropy") return WeightScheme::LogEntropy;
    throw FormatError("unknown weighting scheme token: " + token);
}

}  // namespace

void save_matrix(const SparseCooccurrenceMatrix& m, const std::string& path) {
    {
        std::ofstream out(path);
        if (!out) throw Error("cannot write matrix file: " + path);
        out << "#rows=" << m.rows() << " cols=" << m.cols() << " kind=" << kind_token(m);
        if (m.scheme != WeightScheme::Raw) out << " scheme=" << to_string(m.scheme);
        out << '\n';
        for (const auto& e : m.entries) {
            out << m.row_labels[e.row] << '\t' << m.col_labels[e.col] << '\t'
                << format_g9(e.value) << '\n';
        }
        if (!out) throw Error("failed writing matrix file: " + path);
    }
    {
        std::ofstream cat(path + ".contexts");
        if (!cat) throw Error("cannot write context catalog: " + path + ".contexts");
        for (uint32_t c = 0; c < m.cols(); ++c) {
            cat << m.col_labels[c] << '\t' << format_g9(m.col_marginals[c]) << '\n';
        }
    }
    // Row catalog keeps vocabulary order for rows with no surviving entries.
    std::ofstream rows(path + ".targets");
    if (!rows) throw Error("cannot write target catalog: " + path + ".targets");
    for (const auto& label : m.row_labels) rows << label << '\n';
}

SparseCooccurrenceMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file: " + path);
    std::string line;
    if (!std::getline(in, line) || !starts_with(line, "#")) {
        throw FormatError(path + ": missing matrix header");
    }
    SparseCooccurrenceMatrix m;
    size_t declared_rows = 0, declared_cols = 0;
    int radius = 0;
    for (const auto& field : split(line.substr(1), ' ')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "rows") declared_rows = std::stoull(value);
        else if (key == "cols") declared_cols = std::stoull(value);
        else if (key == "kind") m.kind = kind_from_token(value, &radius);
        else if (key == "scheme") m.scheme = scheme_from_token(value);
    }
    if (radius > 0) m.meta["window_radius"] = std::to_string(radius);

    // Companion catalogs fix row and column id order.
    {
        std::ifstream cat(path + ".contexts");
        if (!cat) throw Error("cannot open context catalog: " + path + ".contexts");
        std::string cat_line;
        while (std::getline(cat, cat_line)) {
            if (cat_line.empty()) continue;
            auto fields = split(cat_line, '\t');
            m.col_ids.emplace(fields[0], static_cast<uint32_t>(m.col_labels.size()));
            m.col_labels.push_back(fields[0]);
        }
    }
    if (m.cols() != declared_cols) {
        throw FormatError(path + ": context catalog size disagrees with header");
    }
    std::unordered_map<std::string, uint32_t> row_ids;
    {
        std::ifstream rows(path + ".targets");
        if (!rows) throw Error("cannot open target catalog: " + path + ".targets");
        std::string row_line;
        while (std::getline(rows, row_line)) {
            if (row_line.empty()) continue;
            row_ids.emplace(row_line, static_cast<uint32_t>(m.row_labels.size()));
            m.row_labels.push_back(row_line);
        }
    }
    if (m.rows() != declared_rows) {
        throw FormatError(path + ": target catalog size disagrees with header");
    }

    int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(path + ": expected 3 TSV fields at line " +
                             std::to_string(line_no));
        }
        auto row = row_ids.find(fields[0]);
        if (row == row_ids.end()) {
            throw FormatError(path + ": target '" + fields[0] + "' not in catalog");
        }
        auto col = m.col_ids.find(fields[1]);
        if (col == m.col_ids.end()) {
            throw FormatError(path + ": context '" + fields[1] + "' not in catalog");
        }
        m.entries.push_back(CoocEntry{row->second, col->second, std::stod(fields[2])});
    }
    std::sort(m.entries.begin(), m.entries.end(), [](const CoocEntry& a, const CoocEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    m.recompute_marginals();
    return m;
}

}  // namespace dsm
