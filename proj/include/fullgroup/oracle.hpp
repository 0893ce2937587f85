#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fullgroup/backend.hpp"
#include "fullgroup/clopen.hpp"
#include "fullgroup/element.hpp"
#include "fullgroup/word.hpp"

// Brute-force reference semantics, written without the trie merges,
// predecessor lookups and canonical forms of the main implementation:
// linear scans over pieces and cylinders, and digit-by-digit arithmetic on
// explicit finite words.

namespace fullgroup::oracle {

/// All words of length d in lexicographic order.
inline std::vector<Word> all_words(int base, std::size_t d) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Word> next;
        next.reserve(out.size() * static_cast<std::size_t>(base));
        for (const auto& w : out)
            for (int s = 0; s < base; ++s) {
                Word x = w;
                x.push_back(s);
                next.push_back(std::move(x));
            }
        out = std::move(next);
    }
    return out;
}

/// Membership bitmap of a clopen set at depth d (d >= its max depth).
inline std::vector<bool> bitmap(const ClopenSet& a, std::size_t d) {
    std::vector<bool> out;
    for (const auto& w : all_words(a.base(), d)) {
        bool in = false;
        for (const auto& c : a.cylinders())
            if (w.size() >= c.size() && w.prefix(c.size()) == c) in = true;
        out.push_back(in);
    }
    return out;
}

/// Adds n to the little-endian digit string x, dropping the carry.
inline Word add_digits(const Word& x, std::int64_t n, int base) {
    Word out;
    std::int64_t carry = n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::int64_t t = x[i] + carry;
        std::int64_t d = ((t % base) + base) % base;
        carry = (t - d) / base;
        out.push_back(static_cast<int>(d));
    }
    return out;
}

/// The prefix of f(x) determined by the finite word x, or nullopt when x is
/// shorter than the piece containing it.
inline std::optional<Word> image_prefix(const std::vector<OdometerPiece>& pieces, int base, const Word& x) {
    for (const auto& p : pieces)
        if (x.size() >= p.source.size() && x.prefix(p.source.size()) == p.source) return add_digits(x, p.power, base);
    return std::nullopt;
}

inline std::optional<Word> image_prefix(const std::vector<ShiftPiece>& pieces, int, const Word& x) {
    for (const auto& p : pieces)
        if (x.size() >= p.source.size() && x.prefix(p.source.size()) == p.source)
            return p.target + x.suffix_from(p.source.size());
    return std::nullopt;
}

/// The restriction of f to the cylinder [x] as a single piece over source x.
inline std::optional<OdometerPiece> restricted(const std::vector<OdometerPiece>& pieces, const Word& x) {
    for (const auto& p : pieces)
        if (x.size() >= p.source.size() && x.prefix(p.source.size()) == p.source) return OdometerPiece{x, p.power};
    return std::nullopt;
}

inline std::optional<ShiftPiece> restricted(const std::vector<ShiftPiece>& pieces, const Word& x) {
    for (const auto& p : pieces)
        if (x.size() >= p.source.size() && x.prefix(p.source.size()) == p.source)
            return ShiftPiece{x, p.target + x.suffix_from(p.source.size())};
    return std::nullopt;
}

/// f = g pointwise, decided by restricting both to every cell of the
/// overlay of their source partitions (a restricted piece determines the
/// map on its cylinder).
template <class B>
bool equal(const Element<B>& f, const Element<B>& g) {
    for (const auto& p : f.pieces())
        for (const auto& q : g.pieces()) {
            if (!p.source.comparable(q.source)) continue;
            const Word& x = p.source.size() >= q.source.size() ? p.source : q.source;
            auto a = restricted(f.pieces(), x);
            auto b = restricted(g.pieces(), x);
            if (!a || !b || !(*a == *b)) return false;
        }
    return true;
}

/// f(g(x)) on the finite word x, or nullopt when x is too short.
template <class B>
std::optional<Word> compose_prefix(const Element<B>& f, const Element<B>& g, const Word& x) {
    auto y = image_prefix(g.pieces(), g.base(), x);
    if (!y) return std::nullopt;
    return image_prefix(f.pieces(), f.base(), *y);
}

/// The determined prefixes a, b of the same point agree on their common
/// length.
inline bool compatible(const Word& a, const Word& b) {
    const std::size_t n = std::min(a.size(), b.size());
    return a.prefix(n) == b.prefix(n);
}

/// Whether the point with prefix y lies in A: true or false when y decides
/// it, nullopt when some cylinder of A strictly extends y.
inline std::optional<bool> member(const ClopenSet& a, const Word& y) {
    bool undecided = false;
    for (const auto& c : a.cylinders()) {
        if (y.size() >= c.size() && y.prefix(c.size()) == c) return true;
        if (c.size() > y.size() && c.prefix(y.size()) == y) undecided = true;
    }
    if (undecided) return std::nullopt;
    return false;
}

/// img = f(A), checked pointwise on all words of length d: x in A exactly
/// when f(x) in img. d must be large enough to decide every membership.
template <class B>
bool image_matches(const Element<B>& f, const ClopenSet& a, const ClopenSet& img, std::size_t d) {
    for (const auto& x : all_words(f.base(), d)) {
        auto y = image_prefix(f.pieces(), f.base(), x);
        if (!y) return false;
        auto in_img = member(img, *y);
        auto in_a = member(a, x);
        if (!in_img || !in_a || *in_img != *in_a) return false;
    }
    return true;
}

}  // namespace fullgroup::oracle
