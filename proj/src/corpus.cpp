#include "dsm/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dsm {

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string to_string(PosTag tag) {
    switch (tag) {
        case PosTag::Noun: return "noun";
        case PosTag::Verb: return "verb";
        case PosTag::Adjective: return "adjective";
        case PosTag::Other: return "other";
    }
    return "other";
}

PosTag pos_tag_from_string(std::string_view s) {
    if (s == "noun") return PosTag::Noun;
    if (s == "verb") return PosTag::Verb;
    if (s == "adjective") return PosTag::Adjective;
    return PosTag::Other;
}

std::vector<Sentence> read_all(SentenceReader& reader) {
    std::vector<Sentence> out;
    Sentence s;
    while (reader.next(s)) out.push_back(std::move(s));
    return out;
}

// ---------------------------------------------------------------------------
// Plain text reader

struct PlainTextReader::Impl {
    std::ifstream in;
    int64_t doc_id = 0;
    bool saw_sentence_in_doc = false;
};

PlainTextReader::PlainTextReader(const std::string& path) : impl_(new Impl) {
    impl_->in.open(path);
    if (!impl_->in) throw Error("cannot open corpus file: " + path);
}

PlainTextReader::~PlainTextReader() = default;

bool PlainTextReader::next(Sentence& out) {
    std::string line;
    while (std::getline(impl_->in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank) {
            // Blank line = document boundary; collapse runs of blanks.
            if (impl_->saw_sentence_in_doc) {
                ++impl_->doc_id;
                impl_->saw_sentence_in_doc = false;
            }
            continue;
        }
        out = Sentence{};
        out.doc_id = impl_->doc_id;
        std::istringstream iss(line);
        std::string tok;
        while (iss >> tok) out.tokens.push_back(lowercase(tok));
        impl_->saw_sentence_in_doc = true;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// CoNLL-U reader

namespace {

PosTag upos_to_tag(std::string_view upos) {
    if (upos == "NOUN") return PosTag::Noun;
    if (upos == "VERB") return PosTag::Verb;
    if (upos == "ADJ") return PosTag::Adjective;
    return PosTag::Other;
}

bool is_plain_token_id(const std::string& id) {
    // Multiword tokens carry ranges ("3-4"), empty nodes decimals ("3.1").
    if (id.empty()) return false;
    for (char c : id) {
        if (c == '-' || c == '.') return false;
        if (c < '0' || c > '9') return false;
    }
    return true;
}

}  // namespace

struct ConlluReader::Impl {
    std::ifstream in;
    std::string path;
    int64_t doc_id = 0;
    bool saw_newdoc = false;
    bool saw_sentence = false;
    int64_t line_no = 0;
};

ConlluReader::ConlluReader(const std::string& path) : impl_(new Impl) {
    impl_->in.open(path);
    impl_->path = path;
    if (!impl_->in) throw Error("cannot open corpus file: " + path);
}

ConlluReader::~ConlluReader() = default;

bool ConlluReader::next(Sentence& out) {
    std::string line;
    out = Sentence{};
    // Arcs are recorded as (head, dep) token indices; head field 0 (root)
    // and "_" produce no arc.
    struct PendingArc {
        int32_t dep;
        int64_t head_conllu;  // 1-based
        std::string rel;
    };
    std::vector<PendingArc> pending;
    bool in_sentence = false;

    auto finish = [&]() -> bool {
        if (out.tokens.empty()) return false;
        for (const auto& arc : pending) {
            if (arc.head_conllu <= 0) continue;  // root
            if (arc.head_conllu > static_cast<int64_t>(out.tokens.size())) {
                throw ParseError(impl_->path + ": head index out of range at line " +
                                 std::to_string(impl_->line_no));
            }
            int32_t head = static_cast<int32_t>(arc.head_conllu - 1);
            if (head == arc.dep) {
                throw ParseError(impl_->path + ": dependency self-loop at line " +
                                 std::to_string(impl_->line_no));
            }
            out.deps.push_back(DepArc{head, arc.dep, arc.rel});
        }
        out.doc_id = impl_->doc_id;
        impl_->saw_sentence = true;
        return true;
    };

    while (std::getline(impl_->in, line)) {
        ++impl_->line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in_sentence && finish()) return true;
            in_sentence = false;
            out = Sentence{};
            pending.clear();
            continue;
        }
        if (line[0] == '#') {
            if (starts_with(line, "# newdoc") || starts_with(line, "#newdoc")) {
                // First "# newdoc" names document 0; later ones advance.
                if (impl_->saw_newdoc || impl_->saw_sentence) ++impl_->doc_id;
                impl_->saw_newdoc = true;
            }
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() < 8) {
            throw ParseError(impl_->path + ": expected >= 8 tab-separated fields at line " +
                             std::to_string(impl_->line_no));
        }
        if (!is_plain_token_id(fields[0])) continue;  // multiword token / empty node
        in_sentence = true;
        out.tokens.push_back(lowercase(fields[1]));
        out.pos.push_back(upos_to_tag(fields[3]));
        int32_t dep_index = static_cast<int32_t>(out.tokens.size() - 1);
        const std::string& head_field = fields[6];
        if (head_field != "_" && !head_field.empty()) {
            int64_t head = 0;
            try {
                head = std::stoll(head_field);
            } catch (const std::exception&) {
                throw ParseError(impl_->path + ": bad HEAD field '" + head_field +
                                 "' at line " + std::to_string(impl_->line_no));
            }
            pending.push_back(PendingArc{dep_index, head, fields[7]});
        }
    }
    if (in_sentence && finish()) return true;
    return false;
}

std::unique_ptr<SentenceReader> open_corpus(const std::string& path) {
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() &&
               std::string_view(path).substr(path.size() - suffix.size()) == suffix;
    };
    if (ends_with(".conllu") || ends_with(".conll")) {
        return std::make_unique<ConlluReader>(path);
    }
    return std::make_unique<PlainTextReader>(path);
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary build_vocabulary(SentenceReader& stream, int64_t min_count,
                            double pos_majority) {
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    std::unordered_map<std::string, int64_t> counts;
    // Per word: occurrence counts of noun/verb/adjective tags.
    std::unordered_map<std::string, std::array<int64_t, 3>> pos_counts;
    bool tagged = false;
    int64_t total = 0;

    Sentence s;
    while (stream.next(s)) {
        for (size_t i = 0; i < s.tokens.size(); ++i) {
            ++counts[s.tokens[i]];
            ++total;
            if (!s.pos.empty()) {
                tagged = true;
                PosTag t = s.pos[i];
                if (t != PosTag::Other) {
                    ++pos_counts[s.tokens[i]][static_cast<size_t>(t)];
                }
            }
        }
    }
    if (total == 0) throw EmptyInputError("cannot build a vocabulary from an empty stream");

    std::vector<std::pair<std::string, int64_t>> kept;
    kept.reserve(counts.size());
    for (auto& [word, c] : counts) {
        if (c >= min_count) kept.emplace_back(word, c);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.total_tokens = total;
    vocab.words.reserve(kept.size());
    vocab.freq.reserve(kept.size());
    if (tagged) vocab.pos_tag.reserve(kept.size());
    for (auto& [word, c] : kept) {
        WordId id = static_cast<WordId>(vocab.words.size());
        vocab.ids.emplace(word, id);
        vocab.words.push_back(word);
        vocab.freq.push_back(c);
        if (tagged) {
            PosTag tag = PosTag::Other;
            auto it = pos_counts.find(word);
            if (it != pos_counts.end()) {
                for (size_t k = 0; k < 3; ++k) {
                    if (static_cast<double>(it->second[k]) >=
                        pos_majority * static_cast<double>(c)) {
                        tag = static_cast<PosTag>(k);
                        break;
                    }
                }
            }
            vocab.pos_tag.push_back(tag);
        }
    }
    return vocab;
}

// ---------------------------------------------------------------------------
// Subsampling

SubsampleReader::SubsampleReader(SentenceReader& inner, const Vocabulary& vocab,
                                 SubsampleConfig cfg)
    : inner_(inner), vocab_(vocab), cfg_(cfg), occurrence_(vocab.size(), 0) {
    if (!(cfg.threshold_t > 0.0 && cfg.threshold_t < 1.0)) {
        throw ConfigError("subsample threshold must lie in (0, 1)");
    }
}

bool SubsampleReader::next(Sentence& out) {
    Sentence s;
    while (inner_.next(s)) {
        out = Sentence{};
        out.doc_id = s.doc_id;
        std::vector<int32_t> remap(s.tokens.size(), -1);
        for (size_t i = 0; i < s.tokens.size(); ++i) {
            ++tokens_seen_;
            bool keep = true;
            if (auto id = vocab_.id_of(s.tokens[i])) {
                int64_t k = occurrence_[*id]++;
                double rel = vocab_.relative_freq(*id);
                if (rel >= cfg_.threshold_t) {
                    double p_remove = 1.0 - std::sqrt(cfg_.threshold_t / rel);
                    double u = unit_double(mix64(cfg_.seed, *id, static_cast<uint64_t>(k)));
                    keep = u >= p_remove;
                }
            }
            if (keep) {
                remap[i] = static_cast<int32_t>(out.tokens.size());
                out.tokens.push_back(s.tokens[i]);
                if (!s.pos.empty()) out.pos.push_back(s.pos[i]);
                ++tokens_kept_;
            }
        }
        for (const auto& arc : s.deps) {
            if (remap[arc.head] < 0 || remap[arc.dep] < 0) continue;
            out.deps.push_back(DepArc{remap[arc.head], remap[arc.dep], arc.rel});
        }
        if (!out.tokens.empty()) return true;
        // Fully removed sentences vanish from the stream.
    }
    return false;
}

std::vector<Sentence> subsample(SentenceReader& stream, const Vocabulary& vocab,
                                SubsampleConfig cfg) {
    SubsampleReader reader(stream, vocab, cfg);
    return read_all(reader);
}

// ---------------------------------------------------------------------------
// Vocabulary file I/O

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write vocabulary file: " + path);
    out << "#total_tokens=" << vocab.total_tokens << "\n";
    for (size_t i = 0; i < vocab.size(); ++i) {
        out << vocab.words[i] << '\t' << vocab.freq[i];
        if (vocab.has_pos()) out << '\t' << to_string(vocab.pos_tag[i]);
        out << '\n';
    }
    if (!out) throw Error("failed writing vocabulary file: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vocabulary file: " + path);
    Vocabulary vocab;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (starts_with(line, "#total_tokens=")) {
                vocab.total_tokens = std::stoll(line.substr(14));
            }
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() < 2) {
            throw ParseError(path + ": expected word<TAB>freq at line " +
                             std::to_string(line_no));
        }
        WordId id = static_cast<WordId>(vocab.words.size());
        vocab.ids.emplace(fields[0], id);
        vocab.words.push_back(fields[0]);
        vocab.freq.push_back(std::stoll(fields[1]));
        if (fields.size() >= 3) vocab.pos_tag.push_back(pos_tag_from_string(fields[2]));
    }
    if (!vocab.pos_tag.empty() && vocab.pos_tag.size() != vocab.words.size()) {
        throw FormatError(path + ": POS column present on only some rows");
    }
    return vocab;
}

// ---------------------------------------------------------------------------
// Corpus writers

void write_plain(const std::vector<Sentence>& sentences, std::ostream& out) {
    int64_t prev_doc = sentences.empty() ? 0 : sentences.front().doc_id;
    for (const auto& s : sentences) {
        if (s.doc_id != prev_doc) {
            out << '\n';
            prev_doc = s.doc_id;
        }
        for (size_t i = 0; i < s.tokens.size(); ++i) {
            if (i > 0) out << ' ';
            out << s.tokens[i];
        }
        out << '\n';
    }
}

void write_plain(const std::vector<Sentence>& sentences, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file: " + path);
    write_plain(sentences, out);
    if (!out) throw Error("failed writing corpus file: " + path);
}

void write_conllu(const std::vector<Sentence>& sentences, std::ostream& out) {
    static const char* upos_name[] = {"NOUN", "VERB", "ADJ", "X"};
    bool first = true;
    int64_t prev_doc = 0;
    for (const auto& s : sentences) {
        if (first || s.doc_id != prev_doc) {
            out << "# newdoc\n";
            prev_doc = s.doc_id;
            first = false;
        }
        // arc lookup: dep index -> (head, rel)
        std::vector<const DepArc*> by_dep(s.tokens.size(), nullptr);
        for (const auto& a : s.deps) by_dep[a.dep] = &a;
        for (size_t i = 0; i < s.tokens.size(); ++i) {
            const char* upos =
                s.pos.empty() ? "_" : upos_name[static_cast<size_t>(s.pos[i])];
            out << (i + 1) << '\t' << s.tokens[i] << "\t_\t" << upos << "\t_\t_\t";
            if (by_dep[i] != nullptr) {
                out << (by_dep[i]->head + 1) << '\t' << by_dep[i]->rel;
            } else {
                out << "_\t_";
            }
            out << "\t_\t_\n";
        }
        out << '\n';
    }
}

void write_conllu(const std::vector<Sentence>& sentences, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file: " + path);
    write_conllu(sentences, out);
    if (!out) throw Error("failed writing corpus file: " + path);
}

}  // namespace dsm
