#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fullgroup/error.hpp"
#include "fullgroup/rational.hpp"
#include "fullgroup/word.hpp"

namespace fullgroup {

class ClopenSet;
ClopenSet canonicalize(int base, std::vector<Word> cylinders);

/// A clopen subset of {0,...,b-1}^N held as its canonical antichain of
/// cylinders: sorted, pairwise incomparable, and never containing all b
/// children of a common parent. Equal sets have identical representations.
class ClopenSet {
public:
    explicit ClopenSet(int base = 2) : base_(base) { check_base(base); }

    static ClopenSet empty(int base) { return ClopenSet(base); }
    static ClopenSet whole(int base) {
        ClopenSet s(base);
        s.cyl_.push_back(Word{});
        return s;
    }
    static ClopenSet cylinder(int base, Word u) { return canonicalize(base, {std::move(u)}); }

    int base() const { return base_; }
    const std::vector<Word>& cylinders() const& { return cyl_; }
    std::vector<Word> cylinders() && { return std::move(cyl_); }
    std::size_t size() const { return cyl_.size(); }

    bool is_empty() const { return cyl_.empty(); }
    bool is_whole() const { return cyl_.size() == 1 && cyl_.front().empty(); }

    std::size_t max_depth() const {
        std::size_t d = 0;
        for (const auto& w : cyl_) d = std::max(d, w.size());
        return d;
    }

    /// Whether the cylinder [u] lies inside the set.
    bool contains_cylinder(const Word& u) const {
        for (std::size_t n = 0; n <= u.size(); ++n)
            if (std::binary_search(cyl_.begin(), cyl_.end(), u.prefix(n))) return true;
        return false;
    }

    bool contains(const PointName& x) const {
        return std::any_of(cyl_.begin(), cyl_.end(), [&](const Word& u) { return x.in_cylinder(u); });
    }

    /// All cylinders of the set expanded so that none is shallower than
    /// `depth`; deeper cylinders are kept as they are.
    std::vector<Word> refined(std::size_t depth) const {
        std::vector<Word> out;
        for (const auto& w : cyl_) {
            if (w.size() >= depth) {
                out.push_back(w);
                continue;
            }
            std::size_t extra = depth - w.size();
            auto count = static_cast<std::uint64_t>(detail::checked_pow(base_, static_cast<int>(extra)));
            for (std::uint64_t i = 0; i < count; ++i) out.push_back(w + counting_word(i, extra, base_));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

    struct Unchecked {};
    ClopenSet(int base, std::vector<Word> canonical, Unchecked) : base_(base), cyl_(std::move(canonical)) {}

private:
    int base_;
    std::vector<Word> cyl_;
};

namespace detail {

using WordSpan = std::span<const Word>;

enum class Cover { Empty, Full, Mixed };

inline Cover cover_of(WordSpan s, bool forced_full, std::size_t depth) {
    if (forced_full) return Cover::Full;
    if (s.empty()) return Cover::Empty;
    // Sorted input puts the prefix itself (if present) first.
    if (s.front().size() == depth) return Cover::Full;
    return Cover::Mixed;
}

inline WordSpan child_span(WordSpan s, std::size_t depth, int symbol) {
    auto lo = std::find_if(s.begin(), s.end(), [&](const Word& w) { return w[depth] >= symbol; });
    auto hi = std::find_if(lo, s.end(), [&](const Word& w) { return w[depth] > symbol; });
    return WordSpan(lo, hi);
}

/// Walks the trie of two sorted cylinder lists and emits the canonical
/// antichain of {x : op(x in a, x in b)}. Complete sibling families are
/// merged on the way back up.
template <class Op>
void combine(WordSpan a, bool a_full, WordSpan b, bool b_full, Word& prefix, int base, Op op,
             std::vector<Word>& out) {
    std::size_t depth = prefix.size();
    Cover ca = cover_of(a, a_full, depth);
    Cover cb = cover_of(b, b_full, depth);
    if (ca != Cover::Mixed && cb != Cover::Mixed) {
        if (op(ca == Cover::Full, cb == Cover::Full)) out.push_back(prefix);
        return;
    }
    std::size_t mark = out.size();
    for (int s = 0; s < base; ++s) {
        WordSpan as = ca == Cover::Mixed ? child_span(a, depth, s) : WordSpan{};
        WordSpan bs = cb == Cover::Mixed ? child_span(b, depth, s) : WordSpan{};
        prefix.push_back(s);
        combine(as, ca == Cover::Full, bs, cb == Cover::Full, prefix, base, op, out);
        prefix.pop_back();
    }
    if (out.size() == mark + static_cast<std::size_t>(base)) {
        bool complete = true;
        for (int s = 0; s < base && complete; ++s) {
            const Word& w = out[mark + static_cast<std::size_t>(s)];
            complete = w.size() == depth + 1 && w.last() == s;
        }
        if (complete) {
            out.resize(mark);
            out.push_back(prefix);
        }
    }
}

template <class Op>
ClopenSet combine_sets(const ClopenSet& a, const ClopenSet& b, Op op) {
    if (a.base() != b.base())
        throw MalformedInput("clopen sets over different bases (" + std::to_string(a.base()) + " vs " +
                             std::to_string(b.base()) + ")");
    std::vector<Word> out;
    Word prefix;
    combine(WordSpan(a.cylinders()), false, WordSpan(b.cylinders()), false, prefix, a.base(), op, out);
    return ClopenSet(a.base(), std::move(out), ClopenSet::Unchecked{});
}

}  // namespace detail

/// Canonical antichain denoting the union of the given cylinders.
inline ClopenSet canonicalize(int base, std::vector<Word> cylinders) {
    check_base(base);
    for (const auto& w : cylinders)
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] >= base) throw MalformedInput("cylinder " + w.text() + " has a symbol outside base " + std::to_string(base));
    std::sort(cylinders.begin(), cylinders.end());
    cylinders.erase(std::unique(cylinders.begin(), cylinders.end()), cylinders.end());
    std::vector<Word> out;
    Word prefix;
    detail::combine(detail::WordSpan(cylinders), false, detail::WordSpan{}, false, prefix, base,
                    [](bool x, bool) { return x; }, out);
    return ClopenSet(base, std::move(out), ClopenSet::Unchecked{});
}

/// Cylinders tagged with their base; mixed bases are malformed input.
inline ClopenSet canonicalize(const std::vector<std::pair<int, Word>>& cylinders) {
    if (cylinders.empty()) throw MalformedInput("cannot infer a base from an empty cylinder list");
    int base = cylinders.front().first;
    std::vector<Word> words;
    for (const auto& [b, w] : cylinders) {
        if (b != base) throw MalformedInput("cylinders over mixed bases");
        words.push_back(w);
    }
    return canonicalize(base, std::move(words));
}

inline ClopenSet complement(const ClopenSet& a) {
    return detail::combine_sets(a, ClopenSet::empty(a.base()), [](bool x, bool) { return !x; });
}

inline ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
    return detail::combine_sets(a, b, [](bool x, bool y) { return x && y; });
}

inline ClopenSet unite(const ClopenSet& a, const ClopenSet& b) {
    return detail::combine_sets(a, b, [](bool x, bool y) { return x || y; });
}

inline ClopenSet difference(const ClopenSet& a, const ClopenSet& b) {
    return detail::combine_sets(a, b, [](bool x, bool y) { return x && !y; });
}

inline bool is_subset(const ClopenSet& a, const ClopenSet& b) { return difference(a, b).is_empty(); }

inline bool disjoint(const ClopenSet& a, const ClopenSet& b) { return intersect(a, b).is_empty(); }

/// Bernoulli (uniform product) measure: mu([u]) = base^-|u|, additive over
/// the antichain.
inline MeasureValue measure(const ClopenSet& a) {
    int e = static_cast<int>(a.max_depth());
    __int128 num = 0;
    for (const auto& w : a.cylinders()) {
        num += detail::checked_pow(a.base(), e - static_cast<int>(w.size()));
        if (num > INT64_MAX) throw std::overflow_error("measure numerator exceeds 64 bits");
    }
    return MeasureValue(a.base(), static_cast<std::uint64_t>(num), e);
}

/// Diameter for d(x, y) = 2^-(first differing index): 2^-k where k is the
/// length of the longest prefix common to every point of the set.
inline MeasureValue diameter_bound(const ClopenSet& a) {
    if (a.is_empty()) throw PreconditionViolation("diameter of the empty set");
    const auto& c = a.cylinders();
    std::size_t k = c.front().size();
    for (const auto& w : c) k = std::min(k, common_prefix_length(c.front(), w));
    return MeasureValue(2, 1, static_cast<int>(k));
}

/// Deterministic choice: the minimal-depth cylinder of the antichain, ties
/// broken lexicographically.
inline Word pick_cylinder(const ClopenSet& a) {
    if (a.is_empty()) throw PreconditionViolation("cannot pick a cylinder from the empty set");
    const auto& c = a.cylinders();
    return *std::min_element(c.begin(), c.end(), [](const Word& x, const Word& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
}

}  // namespace fullgroup
