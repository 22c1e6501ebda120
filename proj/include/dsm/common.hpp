#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dsm {

// Error hierarchy. Library code throws; the CLI maps these to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct EmptyInputError : Error {
    using Error::Error;
};
struct CoverageError : Error {
    using Error::Error;
};
struct InsufficientDataError : Error {
    using Error::Error;
};
struct ZeroVectorError : Error {
    using Error::Error;
};
// Rank statistics on a constant sequence are undefined; callers catch this
// separately from ordinary failures.
struct ConstantInputError : Error {
    using Error::Error;
};
struct AlignmentError : Error {
    using Error::Error;
};

using WarningList = std::vector<std::string>;

inline void warn(WarningList* sink, std::string msg) {
    if (sink != nullptr) sink->push_back(std::move(msg));
}

// splitmix64 finalizer; the basis for all stateless (counter-keyed) random
// decisions so that sharded and single-threaded runs agree bit for bit.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }

inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
    return mix64(mix64(a, b) ^ c);
}

// Uniform double in [0, 1) from 53 random bits.
inline double unit_double(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// 64-bit FNV-1a; used for input content hashes in run manifests.
inline uint64_t fnv1a(std::string_view data, uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// ASCII case folding; non-ASCII bytes pass through unchanged.
inline std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

// Formats a double with 9 significant digits, the precision used by all
// text formats in this project.
std::string format_g9(double v);

}  // namespace dsm
