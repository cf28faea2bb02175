#ifndef TAXMINER_TESTS_HELPERS_H
#define TAXMINER_TESTS_HELPERS_H

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "taxminer/Relation.h"

namespace helpers {

inline taxminer::AttributeSchema contAttr(std::string name, bool nullable = true) {
    taxminer::AttributeSchema attr;
    attr.name = std::move(name);
    attr.kind = taxminer::AttrKind::Continuous;
    attr.nullable = nullable;
    return attr;
}

inline taxminer::AttributeSchema catAttr(std::string name, std::vector<std::string> levels,
                                         bool nullable = true) {
    taxminer::AttributeSchema attr;
    attr.name = std::move(name);
    attr.kind = taxminer::AttrKind::Categorical;
    attr.levels = std::move(levels);
    attr.nullable = nullable;
    return attr;
}

inline taxminer::AttributeSchema textAttr(std::string name, bool nullable = true) {
    taxminer::AttributeSchema attr;
    attr.name = std::move(name);
    attr.kind = taxminer::AttrKind::Text;
    attr.nullable = nullable;
    return attr;
}

inline taxminer::Value num(double x) { return taxminer::Value::number(x); }
inline taxminer::Value cat(const std::string& label) { return taxminer::Value::text(label); }
inline taxminer::Value nul() { return taxminer::Value::null(); }

// Captures the message of an expected exception; empty optional means the
// callable did not throw that type.
template <typename E, typename Fn>
std::optional<std::string> messageOf(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return std::string(e.what());
    } catch (...) {
        return std::nullopt;
    }
    return std::nullopt;
}

template <typename E, typename Fn>
bool throwsWith(Fn&& fn, const std::string& needle) {
    const auto message = messageOf<E>(fn);
    return message.has_value() && message->find(needle) != std::string::npos;
}

// Test-side randomness, deliberately unrelated to the library generator.
class TestRand {
public:
    explicit TestRand(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    int intIn(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

// Unique scratch directory under the working directory, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::absolute("test_tmp_" + tag + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Minimal DOT parser covering the subset the exporters emit: an optional
// graph id, node statements with attribute lists, a=b statements and
// quoted-identifier edges. Returns false on any syntax violation.
class DotChecker {
public:
    explicit DotChecker(const std::string& text) : text_(text) {}

    bool parse() {
        skipSpace();
        if (!word("digraph")) return false;
        skipSpace();
        if (peek() != '{') {
            if (!identifier()) return false;
            skipSpace();
        }
        if (!take('{')) return false;
        skipSpace();
        while (pos_ < text_.size() && peek() != '}') {
            if (!statement()) return false;
            skipSpace();
        }
        if (!take('}')) return false;
        skipSpace();
        return pos_ == text_.size();
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool take(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void skipSpace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool word(const std::string& expected) {
        if (text_.compare(pos_, expected.size(), expected) != 0) return false;
        pos_ += expected.size();
        return true;
    }
    bool quoted() {
        if (!take('"')) return false;
        while (pos_ < text_.size()) {
            if (text_[pos_] == '\\') {
                pos_ += 2;
                continue;
            }
            if (text_[pos_] == '"') {
                ++pos_;
                return true;
            }
            ++pos_;
        }
        return false;
    }
    bool bareId() {
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '.' || text_[pos_] == '-')) {
            ++pos_;
        }
        return pos_ > start;
    }
    bool identifier() { return peek() == '"' ? quoted() : bareId(); }
    bool attrList() {
        if (!take('[')) return false;
        skipSpace();
        while (peek() != ']') {
            if (!identifier()) return false;
            skipSpace();
            if (!take('=')) return false;
            skipSpace();
            if (!identifier()) return false;
            skipSpace();
            if (peek() == ',') {
                ++pos_;
                skipSpace();
            }
        }
        return take(']');
    }
    bool statement() {
        if (!identifier()) return false;
        skipSpace();
        if (peek() == '=') {  // e.g. rankdir=TB
            ++pos_;
            skipSpace();
            if (!identifier()) return false;
            skipSpace();
            return take(';');
        }
        if (peek() == '-') {
            if (!word("->")) return false;
            skipSpace();
            if (!identifier()) return false;
            skipSpace();
        }
        if (peek() == '[') {
            if (!attrList()) return false;
            skipSpace();
        }
        return take(';');
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

inline bool dotParses(const std::string& text) { return DotChecker(text).parse(); }

inline std::size_t countOccurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}

#endif
