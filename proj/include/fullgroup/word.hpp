#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "fullgroup/error.hpp"

namespace fullgroup {

constexpr int kMinBase = 2;
constexpr int kMaxBase = 36;

inline void check_base(int base) {
    if (base < kMinBase || base > kMaxBase)
        throw MalformedInput("base must lie in [2, 36], got " + std::to_string(base));
}

/// Digit character for a symbol: 0-9 then a-z.
inline char symbol_char(int s) {
    return static_cast<char>(s < 10 ? '0' + s : 'a' + (s - 10));
}

/// Inverse of symbol_char; -1 for characters that are not digits.
inline int char_symbol(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    return -1;
}

/// A finite word over {0, ..., base-1}. Index 0 is the first coordinate of
/// the infinite sequence (least significant digit for the odometer).
/// Symbols are stored as raw values, so the underlying string order is the
/// lexicographic order on words.
class Word {
public:
    Word() = default;

    static Word from_symbols(std::string raw) {
        Word w;
        w.sym_ = std::move(raw);
        return w;
    }

    /// Parses digit text ("0110"); "ε" and "" denote the empty word.
    static Word parse(std::string_view text, int base) {
        Word w;
        if (text == "\xCE\xB5") return w;  // ε
        for (char c : text) {
            int s = char_symbol(c);
            if (s < 0 || s >= base)
                throw MalformedInput("symbol '" + std::string(1, c) + "' out of range for base " +
                                     std::to_string(base));
            w.sym_.push_back(static_cast<char>(s));
        }
        return w;
    }

    std::size_t size() const { return sym_.size(); }
    bool empty() const { return sym_.empty(); }
    int operator[](std::size_t i) const { return static_cast<unsigned char>(sym_[i]); }

    void push_back(int s) { sym_.push_back(static_cast<char>(s)); }
    void pop_back() { sym_.pop_back(); }

    Word prefix(std::size_t n) const { return from_symbols(sym_.substr(0, n)); }
    Word suffix_from(std::size_t n) const { return from_symbols(sym_.substr(n)); }

    bool has_prefix(const Word& p) const { return std::string_view(sym_).starts_with(p.sym_); }

    /// Either word is a prefix of the other, i.e. the cylinders intersect.
    bool comparable(const Word& o) const { return has_prefix(o) || o.has_prefix(*this); }

    Word child(int s) const {
        Word w = *this;
        w.push_back(s);
        return w;
    }

    Word parent() const { return from_symbols(sym_.substr(0, sym_.size() - 1)); }

    int last() const { return (*this)[size() - 1]; }

    friend Word operator+(const Word& a, const Word& b) { return from_symbols(a.sym_ + b.sym_); }

    std::string text() const {
        if (sym_.empty()) return "\xCE\xB5";
        std::string out;
        out.reserve(sym_.size());
        for (std::size_t i = 0; i < sym_.size(); ++i) out.push_back(symbol_char((*this)[i]));
        return out;
    }

    const std::string& raw() const { return sym_; }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) { return a.sym_ <=> b.sym_; }

private:
    std::string sym_;
};

/// Length of the longest common prefix of two words.
inline std::size_t common_prefix_length(const Word& a, const Word& b) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
    return n;
}

/// The word of length `len` holding `index` in base `base`, most significant
/// symbol first, so increasing indices enumerate words in lexicographic order.
inline Word counting_word(std::uint64_t index, std::size_t len, int base) {
    std::string raw(len, '\0');
    for (std::size_t i = len; i-- > 0;) {
        raw[i] = static_cast<char>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
    return Word::from_symbols(std::move(raw));
}

/// An eventually periodic point preperiod . period . period . ...
struct PointName {
    Word preperiod;
    Word period;

    int symbol_at(std::size_t i) const {
        if (i < preperiod.size()) return preperiod[i];
        return period[(i - preperiod.size()) % period.size()];
    }

    Word prefix(std::size_t n) const {
        Word w;
        for (std::size_t i = 0; i < n; ++i) w.push_back(symbol_at(i));
        return w;
    }

    bool in_cylinder(const Word& u) const {
        for (std::size_t i = 0; i < u.size(); ++i)
            if (symbol_at(i) != u[i]) return false;
        return true;
    }

    std::string text() const { return preperiod.text() + "(" + period.text() + ")"; }

    friend bool operator==(const PointName&, const PointName&) = default;
};

/// The point u.000... used as a deterministic anchor inside the cylinder [u].
inline PointName zero_tail_point(const Word& u) { return PointName{u, Word::from_symbols(std::string(1, '\0'))}; }

}  // namespace fullgroup

template <>
struct std::hash<fullgroup::Word> {
    std::size_t operator()(const fullgroup::Word& w) const noexcept { return std::hash<std::string>{}(w.raw()); }
};
