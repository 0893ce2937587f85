#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fullgroup/clopen.hpp"
#include "fullgroup/element.hpp"
#include "fullgroup/environment.hpp"
#include "fullgroup/error.hpp"

namespace fullgroup {

enum class PostconditionTag { InvolutionSmallSupport, InsideCaseSupportBound, CommutatorCyclic, CommutatorInsideCase };

inline const char* tag_name(PostconditionTag t) {
    switch (t) {
        case PostconditionTag::InvolutionSmallSupport: return "InvolutionSmallSupport";
        case PostconditionTag::InsideCaseSupportBound: return "InsideCaseSupportBound";
        case PostconditionTag::CommutatorCyclic: return "CommutatorCyclic";
        case PostconditionTag::CommutatorInsideCase: return "CommutatorInsideCase";
    }
    return "?";
}

struct PostconditionReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// An element moving A into B, with the structural guarantees named by its
/// tag. Commutator transfers carry a witness over `witness_env`.
template <class B>
struct TransferResult {
    ClopenSet a;
    ClopenSet b;
    Element<B> element;
    std::optional<DerivedWitness> witness;
    Environment<B> witness_env;
    PostconditionTag tag;
};

template <class B>
PostconditionReport check_postconditions(const TransferResult<B>& t) {
    PostconditionReport rep;
    auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
    const auto& g = t.element;
    const auto img = image_of_clopen(g, t.a);
    const auto supp = support(g);
    if (!is_subset(img, t.b)) fail("image of A is not inside B");
    switch (t.tag) {
        case PostconditionTag::InvolutionSmallSupport:
            if (!compose(g, g).is_identity()) fail("not an involution");
            if (!is_subset(supp, unite(t.a, img))) fail("support not inside A u alpha(A)");
            break;
        case PostconditionTag::InsideCaseSupportBound:
        case PostconditionTag::CommutatorInsideCase:
            if (unite(t.a, supp).is_whole()) fail("A u supp covers the whole space");
            break;
        case PostconditionTag::CommutatorCyclic: {
            const auto img2 = image_of_clopen(g, img);
            if (!is_subset(img2, t.b)) fail("gamma^2(A) is not inside B");
            if (!is_subset(supp, unite(unite(t.a, img), img2))) fail("support not inside A u g(A) u g^2(A)");
            break;
        }
    }
    if (t.tag == PostconditionTag::CommutatorCyclic || t.tag == PostconditionTag::CommutatorInsideCase) {
        if (!t.witness) {
            fail("commutator transfer without witness");
        } else if (!(evaluate(*t.witness, t.witness_env) == g)) {
            fail("witness does not evaluate to the element");
        }
    }
    return rep;
}

namespace detail {

template <class B>
TransferResult<B> checked_transfer(TransferResult<B> t) {
    auto rep = check_postconditions(t);
    if (!rep.ok()) internal_error(std::string("transfer postcondition (") + tag_name(t.tag) + "): " + rep.failures.front());
    return t;
}

inline void require_same_base(const ClopenSet& a, const ClopenSet& b) {
    if (a.base() != b.base()) throw MalformedInput("clopen sets over different bases");
}

}  // namespace detail

/// An element of the topological full group with alpha(A) inside B.
///
/// If B \ A is nonempty, alpha is the involution exchanging A \ B with a
/// comparison range inside B \ A, so supp(alpha) lies in A u alpha(A). If B
/// lies inside A (full shift only), alpha = alpha1 alpha2 where alpha2 pushes
/// A into the complement and alpha1 pulls that back into B, both built away
/// from a reserved cylinder C outside A, so A u supp(alpha) misses C.
template <class B>
TransferResult<B> full_group_transfer(const ClopenSet& a, const ClopenSet& b) {
    detail::require_same_base(a, b);
    const int base = a.base();
    if (b.is_empty()) throw PreconditionViolation("transfer into the empty set");
    if (a.is_whole()) throw PreconditionViolation("transfer of the whole space");
    if constexpr (is_odometer<B>) {
        if (!(measure(a) < measure(b)))
            throw PreconditionViolation("transfer needs mu(A) < mu(B); got " + measure(a).text() + " and " +
                                        measure(b).text());
    }
    TransferResult<B> t{a, b, Element<B>::identity(base), std::nullopt, Environment<B>(base),
                        PostconditionTag::InvolutionSmallSupport};
    if (is_subset(a, b)) return detail::checked_transfer(std::move(t));

    const auto b_rest = difference(b, a);
    if (!b_rest.is_empty()) {
        auto u = compare_clopen<B>(difference(a, b), b_rest);
        t.element = involution_from_bisection(u);
        return detail::checked_transfer(std::move(t));
    }

    detail::ensure(!is_odometer<B>, "odometer transfer with B inside A");
    const auto outside = complement(a);
    const Word c = pick_cylinder(outside);
    const auto reserved = outside.size() == 1 ? ClopenSet::cylinder(base, c.child(0)) : ClopenSet::cylinder(base, c);
    const auto parking = difference(outside, reserved);
    auto push_out = involution_from_bisection(compare_clopen<B>(a, parking));
    auto pull_in = involution_from_bisection(compare_clopen<B>(parking, b));
    t.element = compose(pull_in, push_out);
    t.tag = PostconditionTag::InsideCaseSupportBound;
    return detail::checked_transfer(std::move(t));
}

/// An element of the derived subgroup, gamma = [alpha, beta], with
/// gamma(A) inside B. Requires 3 mu(A) < mu(B) on the odometer.
///
/// If B \ A is nonempty, alpha and beta are involutions sending A \ B to
/// disjoint parts of B \ A, and gamma = beta alpha cyclically permutes
/// A \ B, alpha(A \ B), beta(A \ B). Otherwise (full shift, B inside A)
/// alpha comes from the inside case and beta pushes A u supp(alpha) off
/// itself, leaving A u supp(gamma) proper.
template <class B>
TransferResult<B> commutator_transfer(const ClopenSet& a, const ClopenSet& b) {
    detail::require_same_base(a, b);
    const int base = a.base();
    if (b.is_empty()) throw PreconditionViolation("transfer into the empty set");
    if (a.is_whole()) throw PreconditionViolation("transfer of the whole space");
    if constexpr (is_odometer<B>) {
        const auto ma = measure(a).value();
        if (!(ma + ma + ma < measure(b).value()))
            throw PreconditionViolation("commutator transfer needs 3 mu(A) < mu(B); got " + measure(a).text() + " and " +
                                        measure(b).text());
    }
    TransferResult<B> t{a, b, Element<B>::identity(base), DerivedWitness{}, Environment<B>(base),
                        PostconditionTag::CommutatorCyclic};
    if (is_subset(a, b)) return detail::checked_transfer(std::move(t));

    Element<B> alpha(base), beta(base);
    if (!difference(b, a).is_empty()) {
        const auto a1 = difference(a, b);
        const auto b1 = difference(b, a);
        alpha = full_group_transfer<B>(a1, b1).element;
        const auto rest = difference(b1, image_of_clopen(alpha, a1));
        detail::ensure(!rest.is_empty(), "room left in B after the first involution");
        beta = full_group_transfer<B>(a1, rest).element;
    } else {
        alpha = full_group_transfer<B>(a, b).element;
        const auto grown = unite(a, support(alpha));
        detail::ensure(!grown.is_whole(), "inside case leaves room");
        beta = full_group_transfer<B>(grown, complement(grown)).element;
        t.tag = PostconditionTag::CommutatorInsideCase;
    }
    t.witness_env.bind("alpha", alpha);
    t.witness_env.bind("beta", beta);
    t.witness = DerivedWitness{{{"alpha", "beta"}}};
    t.element = commutator(alpha, beta);
    return detail::checked_transfer(std::move(t));
}

/// Class of a clopen set in Z/(b-1): its cylinder count modulo b-1, which
/// splitting a cylinder (count + b-1) does not change.
inline std::size_t cylinder_class(const ClopenSet& a) {
    const auto m = static_cast<std::size_t>(a.base() - 1);
    return a.size() % m;
}

/// A finitely piecewise involution with alpha(A) = B and supp(alpha) inside
/// A u B, identity on A n B. On the odometer A and B must have equal
/// measure; on the full shift A \ B and B \ A must have the same cylinder
/// count modulo b-1 (always true for b = 2), otherwise no such element of
/// the topological full group exists.
template <class B>
Element<B> exact_swap_involution(const ClopenSet& a, const ClopenSet& b) {
    detail::require_same_base(a, b);
    const int base = a.base();
    if (a == b) return Element<B>::identity(base);
    const auto a1 = difference(a, b);
    const auto b1 = difference(b, a);
    if (a1.is_empty() || b1.is_empty()) throw PreconditionViolation("swap needs A \\ B and B \\ A both nonempty");

    std::vector<typename B::Piece> pieces;
    if constexpr (is_odometer<B>) {
        if (!(measure(a) == measure(b)))
            throw PreconditionViolation("swap needs mu(A) = mu(B); got " + measure(a).text() + " and " + measure(b).text());
        const std::size_t d = std::max(a1.max_depth(), b1.max_depth());
        const auto src = a1.refined(d);
        const auto dst = b1.refined(d);
        detail::ensure(src.size() == dst.size(), "equal measure gives equal counts at a common depth");
        for (std::size_t i = 0; i < src.size(); ++i) {
            const auto off = odometer_offset(src[i], dst[i], base);
            pieces.push_back({src[i], off});
            pieces.push_back({dst[i], -off});
        }
    } else {
        if (cylinder_class(a1) != cylinder_class(b1))
            throw PreconditionViolation("no finitely piecewise swap: cylinder counts " + std::to_string(a1.size()) +
                                        " and " + std::to_string(b1.size()) + " differ modulo " +
                                        std::to_string(base - 1));
        auto src = a1.cylinders();
        auto dst = b1.cylinders();
        // Split the shallowest (then lexicographically first) cylinder of the
        // smaller side until the counts agree.
        auto split_one = [base](std::vector<Word>& ws) {
            auto it = std::min_element(ws.begin(), ws.end(), [](const Word& x, const Word& y) {
                return x.size() != y.size() ? x.size() < y.size() : x < y;
            });
            Word w = *it;
            ws.erase(it);
            for (int s = 0; s < base; ++s) ws.push_back(w.child(s));
            std::sort(ws.begin(), ws.end());
        };
        while (src.size() < dst.size()) split_one(src);
        while (dst.size() < src.size()) split_one(dst);
        for (std::size_t i = 0; i < src.size(); ++i) {
            pieces.push_back({src[i], dst[i]});
            pieces.push_back({dst[i], src[i]});
        }
    }
    for (const auto& c : complement(unite(a1, b1)).cylinders()) pieces.push_back(B::identity_piece(c));
    return Element<B>::from_pieces(base, std::move(pieces));
}

/// One round of the intertwining: the residual neighborhoods after the
/// round and the involution exchanging the two annuli it removed.
template <class B>
struct GWRound {
    int n;
    std::size_t depth;
    ClopenSet residual_a;
    ClopenSet residual_b;
    Element<B> step;
};

/// Snapshot of the truncated intertwining after `round` rounds.
template <class B>
struct GWState {
    ClopenSet a;
    ClopenSet b;
    int round = 0;
    Element<B> partial;
    ClopenSet residual_a;
    ClopenSet residual_b;
    PointName x0;
    PointName y0;
    std::vector<GWRound<B>> history;
};

/// Runs the alternating neighborhood construction for `rounds` rounds.
///
/// A_0 = A \ B and B_0 = B \ A. Round n picks A_n = [x0|k] and a matching
/// neighborhood B_n of y0 at the smallest depth k with k >= n, k above the
/// previous depth, both neighborhoods proper inside the previous residuals
/// and, on the odometer, 2 b^-k < mu(A_{n-1}). The annuli A_{n-1} \ A_n and
/// B_{n-1} \ B_n are then exchanged exactly. On the full shift with b > 2,
/// B_n is a union of r children of [y0|k] where r absorbs the cylinder-count
/// difference of A_0 and B_0 modulo b-1, which keeps every annulus pair
/// swappable.
template <class B>
GWState<B> gw_intertwining(const ClopenSet& a, const ClopenSet& b, int rounds) {
    detail::require_same_base(a, b);
    const int base = a.base();
    if (rounds < 0) throw PreconditionViolation("negative round count");
    const auto a0 = difference(a, b);
    const auto b0 = difference(b, a);
    if (a0.is_empty() || b0.is_empty()) throw PreconditionViolation("intertwining needs A \\ B and B \\ A nonempty");
    if constexpr (is_odometer<B>) {
        if (!(measure(a) == measure(b)))
            throw PreconditionViolation("intertwining needs mu(A) = mu(B); got " + measure(a).text() + " and " +
                                        measure(b).text());
    }

    GWState<B> st{a, b, 0, Element<B>::identity(base), a0, b0, zero_tail_point(pick_cylinder(a0)),
                  zero_tail_point(pick_cylinder(b0)), {}};

    std::size_t r = 1;
    if constexpr (!is_odometer<B>) {
        if (base > 2) {
            const auto m = static_cast<long>(base - 1);
            long diff = (static_cast<long>(b0.size()) - static_cast<long>(a0.size())) % m;
            if (diff < 0) diff += m;
            r = static_cast<std::size_t>(diff) + 1;
        }
    }

    auto neighborhood_b = [&](std::size_t k) {
        const Word c = st.y0.prefix(k);
        if (r == 1) return ClopenSet::cylinder(base, c);
        std::vector<Word> kids{c.child(st.y0.symbol_at(k))};
        for (int s = 0; s < base && kids.size() < r; ++s)
            if (s != st.y0.symbol_at(k)) kids.push_back(c.child(s));
        return canonicalize(base, std::move(kids));
    };

    std::size_t prev_depth = 0;
    for (int n = 1; n <= rounds; ++n) {
        std::size_t k = std::max<std::size_t>(static_cast<std::size_t>(n), n == 1 ? 0 : prev_depth + 1);
        ClopenSet na(base), nb(base);
        for (;; ++k) {
            if constexpr (is_odometer<B>) {
                const Rational cyl(1, detail::checked_pow(base, static_cast<int>(k)));
                if (!(cyl + cyl < measure(st.residual_a).value())) continue;
            }
            na = ClopenSet::cylinder(base, st.x0.prefix(k));
            nb = neighborhood_b(k);
            if (is_subset(na, st.residual_a) && na != st.residual_a && is_subset(nb, st.residual_b) &&
                nb != st.residual_b)
                break;
        }
        const auto ann_a = difference(st.residual_a, na);
        const auto ann_b = difference(st.residual_b, nb);
        auto step = exact_swap_involution<B>(ann_a, ann_b);
        st.partial = compose(step, st.partial);
        st.history.push_back({n, k, na, nb, std::move(step)});
        st.residual_a = std::move(na);
        st.residual_b = std::move(nb);
        st.round = n;
        prev_depth = k;
    }
    return st;
}

/// Conditions of the intertwining at every recorded round: diameters below
/// 2^(1-n), nesting, anchors kept, annulus exchange, support bounds, the
/// odometer measure decay mu(A_n) <= 2^-n mu(A), and the partial element
/// exchanging the settled regions.
template <class B>
PostconditionReport check_gw_state(const GWState<B>& st) {
    PostconditionReport rep;
    auto fail = [&](int n, const std::string& s) { rep.failures.push_back("round " + std::to_string(n) + ": " + s); };
    auto prev_a = difference(st.a, st.b);
    auto prev_b = difference(st.b, st.a);
    const auto a0 = prev_a;
    const auto b0 = prev_b;
    for (const auto& h : st.history) {
        const int n = h.n;
        const Rational bound(1, detail::checked_pow(2, n - 1));
        if (!(diameter_bound(h.residual_a).value() < bound)) fail(n, "diam(A_n) too large");
        if (!(diameter_bound(h.residual_b).value() < bound)) fail(n, "diam(B_n) too large");
        if (!is_subset(h.residual_a, prev_a) || !is_subset(h.residual_b, prev_b)) fail(n, "residuals not nested");
        if (!h.residual_a.contains(st.x0) || !h.residual_b.contains(st.y0)) fail(n, "anchor lost");
        const auto ann_a = difference(prev_a, h.residual_a);
        const auto ann_b = difference(prev_b, h.residual_b);
        if (!(image_of_clopen(h.step, ann_a) == ann_b)) fail(n, "annulus not carried onto annulus");
        if (!is_subset(support(h.step), unite(ann_a, ann_b))) fail(n, "step support escapes the annuli");
        if (!compose(h.step, h.step).is_identity()) fail(n, "step is not an involution");
        if constexpr (is_odometer<B>) {
            const Rational scaled = measure(h.residual_a).value() * Rational(detail::checked_pow(2, n));
            if (scaled > measure(st.a).value()) fail(n, "mu(A_n) > 2^-n mu(A)");
        }
        prev_a = h.residual_a;
        prev_b = h.residual_b;
    }
    const auto settled_a = difference(a0, st.residual_a);
    const auto settled_b = difference(b0, st.residual_b);
    if (!(image_of_clopen(st.partial, settled_a) == settled_b)) rep.failures.push_back("partial: settled regions not exchanged");
    if (!is_subset(support(st.partial), unite(settled_a, settled_b)))
        rep.failures.push_back("partial: support outside the settled regions");
    if (!compose(st.partial, st.partial).is_identity()) rep.failures.push_back("partial: not an involution");
    return rep;
}

}  // namespace fullgroup
