#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "fullgroup/backend.hpp"
#include "fullgroup/clopen.hpp"
#include "fullgroup/element.hpp"

namespace fullgroup {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// mt19937_64 with a portable bounded draw (std distributions are not
/// specified bit-for-bit across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent stream keyed by a label, e.g. "group-axioms/odo3".
    Rng substream(std::string_view label) const { return Rng(splitmix64(seed_ ^ fnv1a(label))); }

    std::uint64_t next() { return eng_(); }

    /// Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        for (;;) {
            const std::uint64_t x = eng_();
            if (x < limit) return x % n;
        }
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

inline Word random_word(Rng& rng, int base, std::size_t len) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(base))));
    return w;
}

/// Union of a few random cylinders of depth 1..max_depth.
inline ClopenSet random_clopen(Rng& rng, int base, std::size_t max_depth) {
    const auto k = rng.between(1, 6);
    std::vector<Word> ws;
    for (std::int64_t i = 0; i < k; ++i)
        ws.push_back(random_word(rng, base, static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_depth)))));
    return canonicalize(base, std::move(ws));
}

/// A random nonempty proper clopen set.
inline ClopenSet random_proper_clopen(Rng& rng, int base, std::size_t max_depth) {
    for (;;) {
        auto a = random_clopen(rng, base, max_depth);
        if (!a.is_empty() && !a.is_whole()) return a;
    }
}

/// Permutation of n items: either uniform or a few random transpositions of
/// the identity, so both dense and sparse elements appear.
inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    if (n < 2) return p;
    if (rng.chance(1, 2)) {
        rng.shuffle(p);
    } else {
        const auto swaps = rng.between(1, 3);
        for (std::int64_t s = 0; s < swaps; ++s) std::swap(p[rng.below(n)], p[rng.below(n)]);
    }
    return p;
}

/// Random complete prefix code with `leaves` leaves (leaves = 1 mod b-1) and
/// depth at most max_depth, built by splitting random shallow leaves.
inline std::vector<Word> random_prefix_code(Rng& rng, int base, std::size_t splits, std::size_t max_depth) {
    std::vector<Word> code{Word{}};
    for (std::size_t s = 0; s < splits; ++s) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < code.size(); ++i)
            if (code[i].size() < max_depth) open.push_back(i);
        if (open.empty()) break;
        const auto i = open[rng.below(open.size())];
        Word w = code[i];
        code.erase(code.begin() + static_cast<std::ptrdiff_t>(i));
        for (int c = 0; c < base; ++c) code.push_back(w.child(c));
    }
    std::sort(code.begin(), code.end());
    return code;
}

/// Random element of the topological full group with source depth at most
/// max_depth.
///
/// Odometer: a permutation pi of the depth-d residues with per-cylinder
/// carries k in {-1, 0, 1}, i.e. m + b^d y -> pi(m) + b^d (y + k), sometimes
/// composed from a power of the adding machine. Full shift: a bijection
/// between two random prefix codes of equal size.
template <class B>
Element<B> random_element(Rng& rng, int base, std::size_t max_depth) {
    if constexpr (is_odometer<B>) {
        if (rng.chance(1, 8)) return odometer_power(base, rng.between(-3, 3));
        const auto d = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_depth)));
        const auto words = ClopenSet::whole(base).refined(d);
        const auto perm = random_permutation(rng, words.size());
        const bool carries = rng.chance(1, 2);
        const std::int64_t scale = detail::checked_pow(base, static_cast<int>(d));
        std::vector<OdometerPiece> pieces;
        for (std::size_t i = 0; i < words.size(); ++i) {
            const std::int64_t k = carries ? rng.between(-1, 1) : 0;
            pieces.push_back({words[i], odometer_offset(words[i], words[perm[i]], base) + k * scale});
        }
        return Element<B>::from_pieces(base, std::move(pieces));
    } else {
        // Leaves grow by b-1 per split; two codes with equal split counts
        // have equal sizes. Cap so both fit under max_depth.
        const auto splits = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(2 * max_depth, 10))));
        const auto src = random_prefix_code(rng, base, splits, max_depth);
        auto dst = rng.chance(1, 3) ? src : random_prefix_code(rng, base, splits, max_depth);
        if (dst.size() != src.size()) dst = src;
        const auto perm = random_permutation(rng, src.size());
        std::vector<ShiftPiece> pieces;
        for (std::size_t i = 0; i < src.size(); ++i) pieces.push_back({src[i], dst[perm[i]]});
        return Element<B>::from_pieces(base, std::move(pieces));
    }
}

template <class B>
Element<B> random_nontrivial_element(Rng& rng, int base, std::size_t max_depth) {
    for (;;) {
        auto e = random_element<B>(rng, base, max_depth);
        if (!e.is_identity()) return e;
    }
}

/// Random (A, B) admissible for the full-group transfer: A proper,
/// B nonempty, and on the odometer factor * mu(A) < mu(B).
template <class B>
std::pair<ClopenSet, ClopenSet> random_transfer_pair(Rng& rng, int base, std::size_t max_depth, std::int64_t factor = 1) {
    for (;;) {
        auto a = random_clopen(rng, base, max_depth);
        if (rng.chance(1, 10)) a = ClopenSet::empty(base);
        auto b = random_proper_clopen(rng, base, max_depth);
        if (!a.is_empty() && !a.is_whole()) {
            switch (rng.below(6)) {
                case 0: b = complement(a); break;
                case 1: b = unite(a, b); break;
                case 2: {
                    // B inside A (only the full shift admits these)
                    const Word c = a.cylinders()[rng.below(a.size())];
                    b = ClopenSet::cylinder(base, c + random_word(rng, base, static_cast<std::size_t>(rng.between(0, 2))));
                    break;
                }
                default: break;
            }
        }
        if (a.is_whole() || b.is_empty()) continue;
        if constexpr (is_odometer<B>) {
            if (!(measure(a).value() * Rational(factor) < measure(b).value())) continue;
        }
        return {a, b};
    }
}

/// Random pair (A, g(A)) with A \ g(A) and g(A) \ A nonempty, so that an
/// exact swap exists on both backends.
template <class B>
std::pair<ClopenSet, ClopenSet> random_swap_pair(Rng& rng, int base, std::size_t max_depth) {
    for (;;) {
        auto a = random_proper_clopen(rng, base, max_depth);
        auto g = random_element<B>(rng, base, max_depth);
        auto b = image_of_clopen(g, a);
        if (!difference(a, b).is_empty() && !difference(b, a).is_empty()) return {a, b};
    }
}

}  // namespace fullgroup
