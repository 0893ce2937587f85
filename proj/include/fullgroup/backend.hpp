#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fullgroup/clopen.hpp"
#include "fullgroup/error.hpp"
#include "fullgroup/rational.hpp"
#include "fullgroup/word.hpp"

namespace fullgroup {

enum class BackendKind { Odometer, FullShift };
enum class MeasureClass { UniqueErgodic, Empty };

struct BackendId {
    BackendKind kind;
    int base;

    MeasureClass measure_class() const {
        return kind == BackendKind::Odometer ? MeasureClass::UniqueErgodic : MeasureClass::Empty;
    }
    /// "odo2", "shift3", ...
    std::string tag() const { return (kind == BackendKind::Odometer ? "odo" : "shift") + std::to_string(base); }

    friend bool operator==(const BackendId&, const BackendId&) = default;
};

// ---------------------------------------------------------------------------
// Odometer pieces

/// Adds an integer to the b-adic number whose least significant digits are
/// `w`, keeping |w| digits. Returns the digits and the carry into the tail,
/// floor((m(w) + n) / b^|w|).
inline std::pair<Word, std::int64_t> odometer_add(const Word& w, std::int64_t n, int base) {
    std::string raw(w.size(), '\0');
    __int128 carry = n;
    for (std::size_t i = 0; i < w.size(); ++i) {
        __int128 t = w[i] + carry;
        __int128 d = t % base;
        if (d < 0) d += base;
        carry = (t - d) / base;
        raw[i] = static_cast<char>(d);
    }
    return {Word::from_symbols(std::move(raw)), detail::narrow(carry)};
}

/// m(v) - m(u) for two words of equal length; the power of the carry-free
/// piece sending [u] onto [v].
inline std::int64_t odometer_offset(const Word& u, const Word& v, int base) {
    if (u.size() != v.size()) detail::internal_error("odometer offset between words of different length");
    __int128 diff = 0, scale = 1;
    for (std::size_t i = 0; i < u.size(); ++i) {
        diff += static_cast<__int128>(v[i] - u[i]) * scale;
        scale *= base;
        if (scale > (static_cast<__int128>(1) << 100)) throw std::overflow_error("odometer offset too deep");
    }
    return detail::narrow(diff);
}

/// The map u.y -> x + power on [u], viewing points as b-adic integers with
/// the least significant digit first.
struct OdometerPiece {
    Word source;
    std::int64_t power = 0;

    friend bool operator==(const OdometerPiece&, const OdometerPiece&) = default;
};

inline Word piece_range(const OdometerPiece& p, int base) { return odometer_add(p.source, p.power, base).first; }

inline bool piece_moves(const OdometerPiece& p) { return p.power != 0; }

inline OdometerPiece piece_restrict(const OdometerPiece& p, const Word& sub) { return {sub, p.power}; }

inline OdometerPiece piece_inverse(const OdometerPiece& p, int base) { return {piece_range(p, base), -p.power}; }

/// outer o inner, valid when the range of `inner` lies inside the source of
/// `outer`.
inline OdometerPiece piece_fuse(const OdometerPiece& outer, const OdometerPiece& inner, int) {
    return {inner.source, detail::checked_add(inner.power, outer.power)};
}

inline std::optional<OdometerPiece> piece_parent(const OdometerPiece& p, int) {
    if (p.source.empty()) return std::nullopt;
    return OdometerPiece{p.source.parent(), p.power};
}

inline Word piece_apply(const OdometerPiece& p, const Word& c, int base) {
    if (!c.has_prefix(p.source))
        throw PreconditionViolation("cylinder " + c.text() + " is not inside source " + p.source.text());
    return odometer_add(c, p.power, base).first;
}

// ---------------------------------------------------------------------------
// Full-shift pieces

/// The prefix exchange u.y -> v.y.
struct ShiftPiece {
    Word source;
    Word target;

    friend bool operator==(const ShiftPiece&, const ShiftPiece&) = default;
};

inline Word piece_range(const ShiftPiece& p, int) { return p.target; }

inline bool piece_moves(const ShiftPiece& p) { return p.source != p.target; }

inline ShiftPiece piece_restrict(const ShiftPiece& p, const Word& sub) {
    return {sub, p.target + sub.suffix_from(p.source.size())};
}

inline ShiftPiece piece_inverse(const ShiftPiece& p, int) { return {p.target, p.source}; }

inline ShiftPiece piece_fuse(const ShiftPiece& outer, const ShiftPiece& inner, int) {
    return {inner.source, outer.target + inner.target.suffix_from(outer.source.size())};
}

inline std::optional<ShiftPiece> piece_parent(const ShiftPiece& p, int) {
    if (p.source.empty() || p.target.empty() || p.source.last() != p.target.last()) return std::nullopt;
    return ShiftPiece{p.source.parent(), p.target.parent()};
}

inline Word piece_apply(const ShiftPiece& p, const Word& c, int) {
    if (!c.has_prefix(p.source))
        throw PreconditionViolation("cylinder " + c.text() + " is not inside source " + p.source.text());
    return p.target + c.suffix_from(p.source.size());
}

// ---------------------------------------------------------------------------
// Backend tags

struct Odometer {
    using Piece = OdometerPiece;
    static constexpr BackendKind kind = BackendKind::Odometer;
    static constexpr const char* prefix = "odo";

    static Piece identity_piece(const Word& u) { return {u, 0}; }
};

struct FullShift {
    using Piece = ShiftPiece;
    static constexpr BackendKind kind = BackendKind::FullShift;
    static constexpr const char* prefix = "shift";

    static Piece identity_piece(const Word& u) { return {u, u}; }
};

template <class B>
inline constexpr bool is_odometer = B::kind == BackendKind::Odometer;

template <class P>
std::vector<P> piece_children(const P& p, int base) {
    std::vector<P> out;
    out.reserve(static_cast<std::size_t>(base));
    for (int s = 0; s < base; ++s) out.push_back(piece_restrict(p, p.source.child(s)));
    return out;
}

// ---------------------------------------------------------------------------
// Bisections

/// A compact open bisection given by finitely many pieces with pairwise
/// disjoint sources and pairwise disjoint ranges.
template <class B>
struct Bisection {
    using Piece = typename B::Piece;

    int base = 2;
    std::vector<Piece> pieces;

    BackendId backend() const { return {B::kind, base}; }

    friend bool operator==(const Bisection&, const Bisection&) = default;
};

struct BisectionViolation {
    enum class Side { Source, Range } side;
    std::size_t first;
    std::size_t second;

    std::string describe() const {
        return std::string(side == Side::Source ? "source" : "range") + " cylinders of pieces " +
               std::to_string(first) + " and " + std::to_string(second) + " overlap";
    }
};

/// Accepts iff sources and ranges are pairwise disjoint; otherwise reports
/// the first offending pair in (i, j) order.
template <class B>
std::optional<BisectionViolation> validate_bisection(const Bisection<B>& u) {
    std::vector<Word> src, rng;
    for (const auto& p : u.pieces) {
        src.push_back(p.source);
        rng.push_back(piece_range(p, u.base));
    }
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = i + 1; j < src.size(); ++j) {
            if (src[i].comparable(src[j])) return BisectionViolation{BisectionViolation::Side::Source, i, j};
            if (rng[i].comparable(rng[j])) return BisectionViolation{BisectionViolation::Side::Range, i, j};
        }
    return std::nullopt;
}

template <class B>
std::pair<ClopenSet, ClopenSet> source_range(const Bisection<B>& u) {
    std::vector<Word> src, rng;
    for (const auto& p : u.pieces) {
        src.push_back(p.source);
        rng.push_back(piece_range(p, u.base));
    }
    return {canonicalize(u.base, std::move(src)), canonicalize(u.base, std::move(rng))};
}

/// Same partial homeomorphism with every source cylinder at depth >= depth.
template <class B>
Bisection<B> refine_bisection(const Bisection<B>& u, std::size_t depth) {
    Bisection<B> out{u.base, {}};
    std::vector<typename B::Piece> work(u.pieces.rbegin(), u.pieces.rend());
    while (!work.empty()) {
        auto p = std::move(work.back());
        work.pop_back();
        if (p.source.size() >= depth) {
            out.pieces.push_back(std::move(p));
            continue;
        }
        auto kids = piece_children(p, u.base);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(std::move(*it));
    }
    return out;
}

/// Comparison: a bisection U with s(U) = A and r(U) inside B.
///
/// Odometer (unique invariant measure): requires mu(A) < mu(B). Both sets are
/// refined to a common depth and A-cylinders are matched to B-cylinders in
/// lexicographic order by carry-free pieces.
///
/// Full shift (no invariant measure): every cylinder u_i of A is sent to
/// v.w_i, where v = pick_cylinder(B) and the w_i are the first words of
/// length ceil(log_b(k+1)) in counting order. One suffix always stays
/// unused, so r(U) is a proper subset of [v].
template <class B>
Bisection<B> compare_clopen(const ClopenSet& a, const ClopenSet& b) {
    if (a.base() != b.base()) throw MalformedInput("comparison of clopen sets over different bases");
    const int base = a.base();
    if (b.is_empty()) throw PreconditionViolation("comparison into the empty set");
    Bisection<B> u{base, {}};
    if (a.is_empty()) return u;

    if constexpr (is_odometer<B>) {
        if (!(measure(a) < measure(b)))
            throw PreconditionViolation("comparison unavailable: mu(A) = " + measure(a).text() +
                                        " is not below mu(B) = " + measure(b).text());
        std::size_t d = std::max(a.max_depth(), b.max_depth());
        auto src = a.refined(d);
        auto dst = b.refined(d);
        detail::ensure(src.size() < dst.size(), "odometer comparison counts");
        for (std::size_t i = 0; i < src.size(); ++i)
            u.pieces.push_back({src[i], odometer_offset(src[i], dst[i], base)});
    } else {
        const Word v = pick_cylinder(b);
        const auto& src = a.cylinders();
        std::size_t len = 0;
        std::uint64_t room = 1;
        while (room < src.size() + 1) {
            room *= static_cast<std::uint64_t>(base);
            ++len;
        }
        for (std::size_t i = 0; i < src.size(); ++i) u.pieces.push_back({src[i], v + counting_word(i, len, base)});
    }
    return u;
}

}  // namespace fullgroup
