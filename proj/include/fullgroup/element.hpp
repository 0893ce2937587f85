#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fullgroup/backend.hpp"
#include "fullgroup/clopen.hpp"
#include "fullgroup/error.hpp"

namespace fullgroup {

namespace detail {

/// Throws unless the words partition the whole space (canonicalize also
/// rejects out-of-range symbols).
inline void require_partition(int base, std::vector<Word> words, const char* side) {
    std::sort(words.begin(), words.end());
    for (std::size_t i = 1; i < words.size(); ++i)
        if (words[i].has_prefix(words[i - 1]))
            throw MalformedInput(std::string(side) + " cylinders " + words[i - 1].text() + " and " + words[i].text() +
                                 " overlap");
    if (!canonicalize(base, std::move(words)).is_whole())
        throw MalformedInput(std::string(side) + " cylinders do not cover the whole space");
}

/// Merges complete sibling families whose maps agree and returns the pieces
/// sorted by source. Sources form a partition, so after sorting a complete
/// family is contiguous and a single stack pass merges bottom-up.
template <class P>
std::vector<P> merge_pieces(std::vector<P> pieces, int base) {
    auto by_source = [](const P& x, const P& y) { return x.source < y.source; };
    if (!std::is_sorted(pieces.begin(), pieces.end(), by_source)) std::sort(pieces.begin(), pieces.end(), by_source);
    std::vector<P> out;
    out.reserve(pieces.size());
    const auto b = static_cast<std::size_t>(base);
    for (auto& p : pieces) {
        out.push_back(std::move(p));
        while (out.size() >= b) {
            const P& last = out.back();
            if (last.source.empty() || last.source.last() != base - 1) break;
            const P& first = out[out.size() - b];
            if (first.source.size() != last.source.size() || first.source.last() != 0) break;
            auto par = piece_parent(first, base);
            if (!par) break;
            bool complete = true;
            for (std::size_t k = 0; k < b && complete; ++k)
                complete = out[out.size() - b + k] == piece_restrict(*par, par->source.child(static_cast<int>(k)));
            if (!complete) break;
            out.resize(out.size() - b);
            out.push_back(std::move(*par));
        }
    }
    return out;
}

}  // namespace detail

/// A finitely piecewise homeomorphism of the whole space: an element of the
/// topological full group. Held in canonical form (maximally merged pieces
/// sorted by source), so syntactic and semantic equality coincide.
template <class B>
class Element {
public:
    using Piece = typename B::Piece;

    explicit Element(int base = 2) : base_(base), pieces_{B::identity_piece(Word{})} { check_base(base); }

    static Element identity(int base) { return Element(base); }

    /// Validates that sources and ranges each partition the space.
    static Element from_pieces(int base, std::vector<Piece> pieces) {
        check_base(base);
        std::vector<Word> src, rng;
        for (const auto& p : pieces) {
            src.push_back(p.source);
            rng.push_back(piece_range(p, base));
        }
        detail::require_partition(base, std::move(src), "source");
        detail::require_partition(base, std::move(rng), "range");
        return Element(base, detail::merge_pieces(std::move(pieces), base), Canonical{});
    }

    static Element from_bisection(const Bisection<B>& u) { return from_pieces(u.base, u.pieces); }

    int base() const { return base_; }
    BackendId backend() const { return {B::kind, base_}; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    Bisection<B> bisection() const { return {base_, pieces_}; }

    bool is_identity() const { return pieces_.size() == 1 && !piece_moves(pieces_.front()); }

    std::size_t max_depth() const {
        std::size_t d = 0;
        for (const auto& p : pieces_) d = std::max(d, p.source.size());
        return d;
    }

    /// The piece whose source contains the cylinder [c], if any (none when
    /// the element is finer than c there).
    const Piece* covering_piece(const Word& c) const {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), c,
                                   [](const Word& w, const Piece& p) { return w < p.source; });
        if (it == pieces_.begin()) return nullptr;
        --it;
        return c.has_prefix(it->source) ? &*it : nullptr;
    }

    /// Pieces whose sources lie strictly inside [c], in source order.
    std::vector<const Piece*> pieces_inside(const Word& c) const {
        std::vector<const Piece*> out;
        auto it = std::lower_bound(pieces_.begin(), pieces_.end(), c,
                                   [](const Piece& p, const Word& w) { return p.source < w; });
        for (; it != pieces_.end() && it->source.has_prefix(c); ++it) out.push_back(&*it);
        return out;
    }

    friend bool operator==(const Element& a, const Element& b) {
        if (a.base_ != b.base_) throw MalformedInput("comparing elements over different bases");
        return a.pieces_ == b.pieces_;
    }

    struct Canonical {};
    Element(int base, std::vector<Piece> canonical, Canonical) : base_(base), pieces_(std::move(canonical)) {}

private:
    int base_;
    std::vector<Piece> pieces_;
};

template <class B>
void require_same_backend(const Element<B>& f, const Element<B>& g) {
    if (f.base() != g.base())
        throw MalformedInput("backend mismatch: " + f.backend().tag() + " vs " + g.backend().tag());
}

/// x -> f(g(x)). Each piece of g is refined until its range lies inside a
/// source of f, then the two pieces are fused.
template <class B>
Element<B> compose(const Element<B>& f, const Element<B>& g) {
    require_same_backend(f, g);
    const int base = f.base();
    if (f.is_identity()) return g;
    if (g.is_identity()) return f;
    std::vector<typename B::Piece> out;
    std::vector<typename B::Piece> work(g.pieces().rbegin(), g.pieces().rend());
    while (!work.empty()) {
        auto p = std::move(work.back());
        work.pop_back();
        Word r = piece_range(p, base);
        if (const auto* q = f.covering_piece(r)) {
            out.push_back(piece_fuse(*q, p, base));
            continue;
        }
        auto kids = piece_children(p, base);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back(std::move(*it));
    }
    return Element<B>(base, detail::merge_pieces(std::move(out), base), typename Element<B>::Canonical{});
}

template <class B>
Element<B> inverse(const Element<B>& f) {
    std::vector<typename B::Piece> out;
    out.reserve(f.pieces().size());
    for (const auto& p : f.pieces()) out.push_back(piece_inverse(p, f.base()));
    return Element<B>(f.base(), detail::merge_pieces(std::move(out), f.base()), typename Element<B>::Canonical{});
}

template <class B>
bool equals(const Element<B>& f, const Element<B>& g) {
    require_same_backend(f, g);
    return f == g;
}

/// Closure of the moved set. Odometer pieces with nonzero power move every
/// point; shift pieces u -> v with u != v fix at most one point of [u], so in
/// both cases the support is the union of the moving sources.
template <class B>
ClopenSet support(const Element<B>& f) {
    std::vector<Word> moved;
    for (const auto& p : f.pieces())
        if (piece_moves(p)) moved.push_back(p.source);
    return canonicalize(f.base(), std::move(moved));
}

template <class B>
ClopenSet image_of_clopen(const Element<B>& f, const ClopenSet& a) {
    if (f.base() != a.base()) throw MalformedInput("image of a clopen set over a different base");
    std::vector<Word> out;
    for (const auto& c : a.cylinders()) {
        if (const auto* p = f.covering_piece(c)) {
            out.push_back(piece_apply(*p, c, f.base()));
            continue;
        }
        for (const auto* p : f.pieces_inside(c)) out.push_back(piece_range(*p, f.base()));
    }
    return canonicalize(f.base(), std::move(out));
}

template <class B>
ClopenSet preimage_of_clopen(const Element<B>& f, const ClopenSet& a) {
    return image_of_clopen(inverse(f), a);
}

/// f g f^-1 g^-1.
template <class B>
Element<B> commutator(const Element<B>& f, const Element<B>& g) {
    return compose(compose(f, g), compose(inverse(f), inverse(g)));
}

/// g f g^-1.
template <class B>
Element<B> conjugate(const Element<B>& g, const Element<B>& f) {
    return compose(compose(g, f), inverse(g));
}

/// The element equal to `f` on `region` and to `g` on `other`, identity
/// elsewhere. Throws MalformedInput unless the pieces form a bijection.
template <class B>
Element<B> patch(const Element<B>& f, const ClopenSet& region, const Element<B>& g, const ClopenSet& other) {
    require_same_backend(f, g);
    const int base = f.base();
    std::vector<typename B::Piece> out;
    auto take = [&](const Element<B>& h, const ClopenSet& r) {
        for (const auto& c : r.cylinders()) {
            if (const auto* p = h.covering_piece(c)) {
                out.push_back(piece_restrict(*p, c));
                continue;
            }
            for (const auto* p : h.pieces_inside(c)) out.push_back(*p);
        }
    };
    take(f, region);
    take(g, other);
    for (const auto& c : complement(unite(region, other)).cylinders()) out.push_back(B::identity_piece(c));
    return Element<B>::from_pieces(base, std::move(out));
}

/// The involution equal to sigma_U on s(U), sigma_U^-1 on r(U) and the
/// identity elsewhere. Requires s(U) and r(U) disjoint.
template <class B>
Element<B> involution_from_bisection(const Bisection<B>& u) {
    auto [s, r] = source_range(u);
    if (!disjoint(s, r)) throw PreconditionViolation("bisection source and range overlap; no involution");
    std::vector<typename B::Piece> out;
    for (const auto& p : u.pieces) {
        out.push_back(p);
        out.push_back(piece_inverse(p, u.base));
    }
    for (const auto& c : complement(unite(s, r)).cylinders()) out.push_back(B::identity_piece(c));
    return Element<B>::from_pieces(u.base, std::move(out));
}

struct MeasureInvarianceReport {
    bool passed = true;
    bool vacuous = false;
    std::size_t checked = 0;
    std::optional<ClopenSet> violation;
};

/// mu(f(A)) = mu(A) for each trial A. The full shift carries no invariant
/// probability measure, so there the check passes vacuously.
template <class B>
MeasureInvarianceReport check_measure_invariance(const Element<B>& f, const std::vector<ClopenSet>& trials) {
    MeasureInvarianceReport rep;
    if constexpr (!is_odometer<B>) {
        rep.vacuous = true;
        return rep;
    } else {
        for (const auto& a : trials) {
            ++rep.checked;
            if (!(measure(image_of_clopen(f, a)) == measure(a))) {
                rep.passed = false;
                rep.violation = a;
                return rep;
            }
        }
        return rep;
    }
}

/// phi^n, the n-th power of the adding machine.
inline Element<Odometer> odometer_power(int base, std::int64_t n) {
    return Element<Odometer>::from_pieces(base, {OdometerPiece{Word{}, n}});
}

}  // namespace fullgroup
