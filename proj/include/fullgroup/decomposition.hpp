#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fullgroup/element.hpp"
#include "fullgroup/environment.hpp"
#include "fullgroup/error.hpp"
#include "fullgroup/trace.hpp"
#include "fullgroup/transfer.hpp"

namespace fullgroup {

/// Breadth-first search below the sources of the moving pieces of f (in
/// canonical order, then by depth, then lexicographically) for a cylinder
/// satisfying `accept`. Depth below each source is capped at `max_extra`.
template <class B>
std::optional<Word> find_moving_cylinder(const Element<B>& f, const std::function<bool(const Word&)>& accept,
                                         std::size_t max_extra = 24) {
    const int base = f.base();
    for (const auto& p : f.pieces()) {
        if (!piece_moves(p)) continue;
        std::deque<Word> frontier{p.source};
        while (!frontier.empty()) {
            Word c = std::move(frontier.front());
            frontier.pop_front();
            if (accept(c)) return c;
            if (c.size() - p.source.size() >= max_extra) continue;
            for (int s = 0; s < base; ++s) frontier.push_back(c.child(s));
        }
    }
    return std::nullopt;
}

/// A cylinder C with C n f(C) empty, f(C) u C proper, and (when given)
/// mu(C) below `measure_below`.
template <class B>
Word separating_cylinder(const Element<B>& f, std::optional<Rational> measure_below = std::nullopt) {
    if (f.is_identity()) throw PreconditionViolation("the identity has no separating cylinder");
    const int base = f.base();
    auto found = find_moving_cylinder(f, [&](const Word& c) {
        const auto cyl = ClopenSet::cylinder(base, c);
        if (measure_below && !(measure(cyl).value() < *measure_below)) return false;
        const auto img = image_of_clopen(f, cyl);
        return disjoint(cyl, img) && !unite(cyl, img).is_whole();
    });
    if (!found) detail::internal_error("no separating cylinder found for a nontrivial element");
    return *found;
}

/// A nonempty clopen C with C n f(C) empty, grown greedily: cylinders of
/// the support at depth L = depth(f) + 1, L + 1, ... are added in
/// lexicographic order whenever C stays disjoint from its image, stopping
/// after the first depth that yields anything. Much larger than a single
/// separating cylinder when f has many pieces.
template <class B>
ClopenSet separating_clopen(const Element<B>& f) {
    if (f.is_identity()) throw PreconditionViolation("the identity has no separating set");
    const int base = f.base();
    const auto supp = support(f);
    for (std::size_t depth = f.max_depth() + 1; depth <= f.max_depth() + 64; ++depth) {
        ClopenSet c(base), image(base);
        for (const auto& w : supp.refined(depth)) {
            const auto cyl = ClopenSet::cylinder(base, w);
            const auto img = image_of_clopen(f, cyl);
            if (!disjoint(cyl, img) || !disjoint(cyl, image) || !disjoint(img, c)) continue;
            c = unite(c, cyl);
            image = unite(image, img);
        }
        if (!c.is_empty()) return c;
    }
    detail::internal_error("no separating set found for a nontrivial element");
}

/// alpha = factors[0] * factors[1] * ... (rightmost acts first), with
/// supp(factors[i]) inside bounds[i], a proper clopen set (of measure below
/// epsilon on the odometer). `cells[i]` is the region the factor was peeled
/// from.
template <class B>
struct DecompositionResult {
    std::vector<Element<B>> factors;
    std::vector<ClopenSet> bounds;
    std::vector<ClopenSet> cells;
    std::optional<Rational> epsilon;
};

template <class B>
Element<B> product(const std::vector<Element<B>>& factors, int base) {
    Element<B> acc = Element<B>::identity(base);
    for (const auto& f : factors) acc = compose(acc, f);
    return acc;
}

/// Smallest d with b^-d < eps/2, for 0 < eps <= 1.
inline std::size_t partition_depth(int base, const Rational& eps) {
    std::size_t d = 0;
    while (!(Rational(2) < eps * Rational(detail::checked_pow(base, static_cast<int>(d))))) ++d;
    return d;
}

/// Writes alpha as a product of elements with small proper supports.
///
/// Odometer: the space is cut into depth-d cylinders A_1 < A_2 < ... with
/// b^-d < eps/2 (eps clamped to 1). For each A_i the residual rho agrees on
/// A_i with the factor alpha_i, which sends rho(A_i) \ A_i back onto
/// A_i \ rho(A_i) by an exact swap; then rho <- alpha_i^-1 rho fixes A_i.
/// Full shift: alpha_1 exchanges a separating cylinder A with alpha(A), and
/// alpha_2 = alpha_1^-1 alpha fixes A. Identity factors are dropped.
template <class B>
DecompositionResult<B> decompose_small_support(const Element<B>& alpha, std::optional<Rational> epsilon = std::nullopt) {
    const int base = alpha.base();
    DecompositionResult<B> out;
    if constexpr (is_odometer<B>) {
        if (!epsilon) throw PreconditionViolation("odometer decomposition needs epsilon");
        if (!(Rational(0) < *epsilon)) throw PreconditionViolation("epsilon must be positive, got " + epsilon->text());
        out.epsilon = epsilon;
    }
    if (alpha.is_identity()) return out;

    auto push = [&](Element<B> f, ClopenSet bound, ClopenSet cell) {
        if (f.is_identity()) return;
        out.factors.push_back(std::move(f));
        out.bounds.push_back(std::move(bound));
        out.cells.push_back(std::move(cell));
    };

    if constexpr (is_odometer<B>) {
        const Rational eps = std::min(*epsilon, Rational(1));
        const std::size_t d = partition_depth(base, eps);
        Element<B> rho = alpha;
        for (const auto& w : ClopenSet::whole(base).refined(d)) {
            const auto cell = ClopenSet::cylinder(base, w);
            const auto img = image_of_clopen(rho, cell);
            const auto leave = difference(cell, img);
            const auto enter = difference(img, cell);
            Element<B> back = leave.is_empty() ? Element<B>::identity(base) : exact_swap_involution<B>(enter, leave);
            auto f = patch(rho, cell, back, enter);
            rho = compose(inverse(f), rho);
            push(std::move(f), unite(cell, img), cell);
        }
        detail::ensure(rho.is_identity(), "residual after peeling every cell");
    } else {
        const Word a = separating_cylinder(alpha);
        const auto cell = ClopenSet::cylinder(base, a);
        const auto img = image_of_clopen(alpha, cell);
        auto a1 = patch(alpha, cell, inverse(alpha), img);
        auto a2 = compose(inverse(a1), alpha);
        push(std::move(a1), unite(cell, img), cell);
        push(std::move(a2), complement(cell), complement(cell));
    }
    std::vector<Element<B>> fs = out.factors;
    detail::ensure(product(fs, base) == alpha, "decomposition reproduces the input");
    return out;
}

/// tau = tau1 tau2 with both supports proper, and tau1 written as a product
/// of two conjugates of tau^(+-1) over `env` (names "tau", "sigma", "gamma"
/// and the witnesses of sigma and gamma).
template <class B>
struct SplitResult {
    Element<B> tau1;
    Element<B> tau2;
    ConjugateProduct certificate;
    Environment<B> env;
    DerivedWitness sigma_witness;
    DerivedWitness gamma_witness;
    ClopenSet a;
    ClopenSet a0;
    ProofTrace trace;
};

/// Splits an element with possibly full support into two elements with
/// proper supports.
///
/// A is a separating cylinder for tau (odometer: mu(A) < 1/16), sigma_0
/// moves tau(A) off A u tau(A) onto B, and A is halved until A u tau(A) u
/// tau^-1(A) u B leaves a nonempty complement C. With A_0 the first child of
/// A and B_0 = sigma_0(tau(A_0)), sigma = [sigma_2, sigma_1] = sigma_1 sigma_2
/// cycles A_0 -> B_0 -> tau(A_0) -> A_0, and gamma in the derived subgroup
/// moves tau(A) u B into C. Then tau_0 = [gamma sigma gamma^-1, tau],
/// tau_1 = gamma^-1 tau_0 gamma agrees with tau on A_0, and
/// tau_2 = tau_1^-1 tau fixes A_0.
template <class B>
SplitResult<B> split_nontrivial_support(const Element<B>& tau) {
    if (tau.is_identity()) throw PreconditionViolation("cannot split the identity");
    const int base = tau.base();
    std::optional<Rational> small;
    if constexpr (is_odometer<B>) small = Rational(1, 16);

    ProofTrace trace;
    Word a = separating_cylinder(tau, small);
    ClopenSet aset(base), ta(base), b(base), rest(base);
    Element<B> sigma0(base);
    for (;;) {
        aset = ClopenSet::cylinder(base, a);
        ta = image_of_clopen(tau, aset);
        sigma0 = full_group_transfer<B>(ta, complement(unite(aset, ta))).element;
        b = image_of_clopen(sigma0, ta);
        rest = complement(unite(unite(aset, ta), unite(preimage_of_clopen(tau, aset), b)));
        if (!rest.is_empty()) break;
        a = a.child(0);
    }
    trace.push_back({"separating-cylinder", "A n tau(A) empty, room left outside A u tau(A) u tau^-1(A) u B",
                     {{"A", aset}, {"tau(A)", ta}, {"B", b}, {"C", rest}}});

    const auto a0 = ClopenSet::cylinder(base, a.child(0));
    const auto ta0 = image_of_clopen(tau, a0);
    const auto b0 = image_of_clopen(sigma0, ta0);
    auto sigma1 = patch(tau, a0, inverse(tau), ta0);
    auto sigma2 = patch(sigma0, ta0, inverse(sigma0), b0);
    auto sigma = commutator(sigma2, sigma1);
    detail::ensure(sigma == compose(sigma1, sigma2), "sigma is the product of two disjoint-pair involutions");
    trace.push_back({"three-cycle", "sigma = [sigma2, sigma1] cycles A0, tau(A0), B0",
                     {{"A0", a0}, {"tau(A0)", ta0}, {"B0", b0}}});

    auto gamma_t = commutator_transfer<B>(unite(ta, b), rest);
    const auto& gamma = gamma_t.element;
    trace.push_back({"commutator-transfer", tag_name(gamma_t.tag),
                     {{"tau(A) u B", unite(ta, b)}, {"gamma(tau(A) u B)", image_of_clopen(gamma, unite(ta, b))}}});

    auto tau0 = commutator(conjugate(gamma, sigma), tau);
    auto tau1 = conjugate(inverse(gamma), tau0);
    auto tau2 = compose(inverse(tau1), tau);

    SplitResult<B> r{tau1, tau2, {}, Environment<B>(base), DerivedWitness{{{"sigma2", "sigma1"}}},
                     DerivedWitness{{{"gamma.alpha", "gamma.beta"}}}, aset, a0, std::move(trace)};
    r.env.bind("tau", tau);
    r.env.bind("sigma", sigma);
    r.env.bind("sigma1", sigma1);
    r.env.bind("sigma2", sigma2);
    r.env.bind("gamma", gamma);
    r.env.bind("gamma.alpha", gamma_t.witness_env.get("alpha"));
    r.env.bind("gamma.beta", gamma_t.witness_env.get("beta"));
    const auto gamma_inv = GroupWord::letter("gamma", -1);
    r.certificate.generator = "tau";
    r.certificate.factors = {{GroupWord::letter("sigma") * gamma_inv, 1}, {gamma_inv, -1}};
    r.trace.push_back({"split", "tau1 = (sigma gamma^-1) tau (sigma gamma^-1)^-1 * gamma^-1 tau^-1 gamma",
                       {{"supp(tau1)", support(tau1)}, {"supp(tau2)", support(tau2)}}});
    return r;
}

}  // namespace fullgroup
