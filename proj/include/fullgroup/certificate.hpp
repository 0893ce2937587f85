#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fullgroup/decomposition.hpp"
#include "fullgroup/element.hpp"
#include "fullgroup/environment.hpp"
#include "fullgroup/error.hpp"
#include "fullgroup/trace.hpp"
#include "fullgroup/transfer.hpp"

namespace fullgroup {

struct ConjugatedCommutator {
    GroupWord conjugator;
    std::size_t i;  // index into gs
    std::size_t j;  // index into hs
};

/// [g_1...g_n, h_1...h_m] = prod over i = n..1, j = 1..m of
/// (P_i Q_j) [g_i, h_j] (P_i Q_j)^-1 with P_i = g_1...g_{i-1} and
/// Q_j = h_1...h_{j-1}.
struct CommutatorExpansion {
    GroupWord lhs;
    GroupWord rhs;
    std::vector<ConjugatedCommutator> terms;
};

inline CommutatorExpansion expand_commutator_product(const std::vector<std::string>& gs,
                                                     const std::vector<std::string>& hs) {
    if (gs.empty() || hs.empty()) throw PreconditionViolation("commutator expansion needs nonempty factor lists");
    CommutatorExpansion out;
    GroupWord g, h;
    for (const auto& x : gs) g *= GroupWord::letter(x);
    for (const auto& x : hs) h *= GroupWord::letter(x);
    out.lhs = g * h * g.inverse() * h.inverse();
    for (std::size_t i = gs.size(); i-- > 0;) {
        GroupWord p;
        for (std::size_t k = 0; k < i; ++k) p *= GroupWord::letter(gs[k]);
        GroupWord q;
        for (std::size_t j = 0; j < hs.size(); ++j) {
            GroupWord c = p * q;
            out.rhs *= c * GroupWord::commutator(gs[i], hs[j]) * c.inverse();
            out.terms.push_back({std::move(c), i, j});
            q *= GroupWord::letter(hs[j]);
        }
    }
    return out;
}

struct NormalityCertificate {
    GroupWord conjugator;
    ProofTrace trace;
    std::vector<std::string> new_names;
};

/// A commutator word w with alpha tau alpha^-1 = w tau w^-1.
///
/// When supp(alpha) is small enough to be pushed off B = supp(tau), w is
/// [alpha, gamma] with gamma(supp alpha) outside B, so gamma alpha^-1
/// gamma^-1 commutes with tau. Otherwise alpha is decomposed into
/// alpha_1...alpha_n with small supports and w = w_1...w_n, where w_i
/// handles alpha_i against the already conjugated w_{i+1}...w_n tau (..)^-1.
/// New elements are bound in env under `prefix`.
template <class B>
NormalityCertificate normality_certificate(const std::string& tau_name, const std::string& alpha_name,
                                           Environment<B>& env, const std::string& prefix = "n") {
    const Element<B> tau = env.get(tau_name);
    const Element<B> alpha = env.get(alpha_name);
    NormalityCertificate out;
    const auto btau = support(tau);
    if (btau.is_whole()) throw PreconditionViolation("normality certificate needs supp(tau) proper; split tau first");
    if (alpha.is_identity()) return out;

    const auto room = measure(complement(btau)).value();
    const auto asupp = support(alpha);
    bool small = !asupp.is_whole();
    if constexpr (is_odometer<B>) small = small && measure(asupp).value() < room;

    std::vector<std::string> names;
    if (small) {
        names.push_back(alpha_name);
    } else {
        auto dec = decompose_small_support(alpha, std::optional<Rational>(room));
        for (std::size_t i = 0; i < dec.factors.size(); ++i) {
            std::string nm = prefix + ".alpha" + std::to_string(i + 1);
            env.bind(nm, dec.factors[i]);
            names.push_back(nm);
            out.new_names.push_back(nm);
        }
        out.trace.push_back({"decompose", "alpha split into " + std::to_string(names.size()) + " small factors", {}});
    }

    Element<B> current = tau;
    GroupWord w;
    for (std::size_t k = names.size(); k-- > 0;) {
        const auto& ai = env.get(names[k]);
        const auto a = support(ai);
        const auto target = complement(support(current));
        auto gamma = full_group_transfer<B>(a, target).element;
        std::string gname = prefix + ".gamma" + std::to_string(k + 1);
        env.bind(gname, gamma);
        out.new_names.push_back(gname);
        GroupWord wi = GroupWord::commutator(names[k], gname);
        current = conjugate(commutator(ai, gamma), current);
        w = wi * w;
        out.trace.push_back({"push-off", names[k] + " against the conjugated generator via " + gname,
                             {{"supp", a}, {"gamma(supp)", image_of_clopen(gamma, a)}}});
    }
    out.conjugator = std::move(w);
    return out;
}

/// A certificate: [alpha, beta] as a product of conjugates of tau0^(+-1),
/// with intermediate elements bound in the environment.
struct ClosureCertificate {
    ConjugateProduct product;
    ProofTrace trace;
    std::size_t atomic_pairs = 0;
};

namespace detail {

/// [a, b] for two elements with proper, small supports, as 8 conjugates of
/// tau0^(+-1): gamma = [gamma0, sigma^-1 tau0 sigma] pushes supp(a) off
/// supp(b), and [a, b] = [a, gamma] b [a, gamma]^-1 b^-1 unfolds to
/// a gamma a^-1 * gamma^-1 * b gamma b^-1 * (b a) gamma^-1 (b a)^-1.
template <class B>
ConjugateProduct atomic_closure(const std::string& a_name, const std::string& b_name, const std::string& tau0_name,
                                const ClopenSet& cyl, Environment<B>& env, const std::string& tag, ProofTrace& trace) {
    const auto& a = env.get(a_name);
    const auto& b = env.get(b_name);
    const auto asupp = support(a);
    const auto bsupp = support(b);
    auto gamma0 = full_group_transfer<B>(asupp, complement(bsupp)).element;
    const auto d = unite(asupp, support(gamma0));
    auto sigma = full_group_transfer<B>(d, cyl).element;
    const std::string g0 = tag + ".gamma0";
    const std::string sg = tag + ".sigma";
    env.bind(g0, gamma0);
    env.bind(sg, sigma);
    trace.push_back({"atomic-pair", a_name + " with " + b_name,
                     {{"A", asupp}, {"B", bsupp}, {"D", d}, {"sigma(D)", image_of_clopen(sigma, d)}}});

    const GroupWord sinv = GroupWord::letter(sg, -1);
    ConjugateProduct gamma{tau0_name, {{GroupWord::letter(g0) * sinv, 1}, {sinv, -1}}};
    const ConjugateProduct gamma_inv = gamma.inverse();
    const GroupWord wa = GroupWord::letter(a_name);
    const GroupWord wb = GroupWord::letter(b_name);
    ConjugateProduct out = gamma.conjugated_by(wa);
    out *= gamma_inv;
    out *= gamma.conjugated_by(wb);
    out *= gamma_inv.conjugated_by(wb * wa);
    return out;
}

/// Names of small-support factors of the named element: the element itself
/// if `fits` accepts its support, else its decomposition bound under `tag`.
template <class B, class Fits>
std::vector<std::string> small_factors(const std::string& name, Environment<B>& env, const Fits& fits,
                                       std::optional<Rational> eps, const std::string& tag, ProofTrace& trace) {
    const auto& e = env.get(name);
    if (fits(support(e))) return {name};
    auto dec = decompose_small_support(e, eps);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dec.factors.size(); ++i) {
        std::string nm = tag + std::to_string(i + 1);
        env.bind(nm, dec.factors[i]);
        out.push_back(nm);
    }
    std::vector<std::pair<std::string, ClopenSet>> sets;
    for (std::size_t i = 0; i < dec.bounds.size(); ++i) sets.emplace_back(out[i], dec.bounds[i]);
    trace.push_back({"decompose", name + " into " + std::to_string(out.size()) + " factors", std::move(sets)});
    return out;
}

}  // namespace detail

/// [alpha, beta] as a product of conjugates of tau0^(+-1).
///
/// C is a clopen set with tau0(C) n C empty. beta is cut into factors with
/// proper supports B_j and alpha into factors with supports A_i small
/// enough (odometer: mu(A_i) < eta/2, eta = min(mu(not B_j), mu(C))) that
/// each atomic pair [alpha_i, beta_j] has an 8-factor certificate; the
/// pairs are chained by the commutator product expansion.
template <class B>
ClosureCertificate commutator_in_normal_closure(const std::string& alpha_name, const std::string& beta_name,
                                                const std::string& tau0_name, Environment<B>& env,
                                                const std::string& prefix = "c") {
    const Element<B> tau0 = env.get(tau0_name);
    const Element<B> alpha = env.get(alpha_name);
    const Element<B> beta = env.get(beta_name);
    if (tau0.is_identity()) throw PreconditionViolation("the normal closure of the identity is trivial");
    ClosureCertificate out;
    out.product.generator = tau0_name;
    if (commutator(alpha, beta).is_identity()) return out;

    const auto cyl = separating_clopen(tau0);
    out.trace.push_back({"separating-set", "tau0(C) n C empty", {{"C", cyl}, {"tau0(C)", image_of_clopen(tau0, cyl)}}});

    // beta is cut when its support is whole or, on the odometer, when the
    // room left outside it would bind eta more tightly than C and 1/2 do.
    std::optional<Rational> beta_eps;
    Rational beta_room(0);
    if constexpr (is_odometer<B>) {
        beta_eps = Rational(1, 2);
        beta_room = std::min(measure(cyl).value(), Rational(1, 2));
    }
    auto roomy = [&](const ClopenSet& s) {
        if (s.is_whole()) return false;
        if constexpr (is_odometer<B>) return !(measure(complement(s)).value() < beta_room);
        return true;
    };
    auto hs = detail::small_factors(beta_name, env, roomy, beta_eps, prefix + ".beta", out.trace);

    Rational eta(1);
    if constexpr (is_odometer<B>) {
        eta = measure(cyl).value();
        for (const auto& h : hs) eta = std::min(eta, measure(complement(support(env.get(h)))).value());
    }
    const Rational half = eta * Rational(1, 2);
    auto small = [&](const ClopenSet& s) {
        if (s.is_whole()) return false;
        if constexpr (is_odometer<B>) return measure(s).value() < half;
        return true;
    };
    std::optional<Rational> eps;
    if constexpr (is_odometer<B>) eps = half;
    auto gs = detail::small_factors(alpha_name, env, small, eps, prefix + ".alpha", out.trace);

    auto expansion = expand_commutator_product(gs, hs);
    for (const auto& term : expansion.terms) {
        const auto& a = env.get(gs[term.i]);
        const auto& b = env.get(hs[term.j]);
        if (commutator(a, b).is_identity()) continue;
        const std::string tag = prefix + ".p" + std::to_string(term.i + 1) + "_" + std::to_string(term.j + 1);
        auto atomic = detail::atomic_closure(gs[term.i], hs[term.j], tau0_name, cyl, env, tag, out.trace);
        detail::ensure(atomic.factors.size() == 8, "atomic certificates have 8 factors");
        out.product *= atomic.conjugated_by(term.conjugator);
        ++out.atomic_pairs;
    }
    detail::ensure(out.product.factors.size() == 8 * out.atomic_pairs, "factor count matches the expansion");
    return out;
}

/// Concatenated certificates for prod_k [alpha_k, beta_k].
template <class B>
ClosureCertificate simplicity_certificate(const std::string& tau0_name,
                                          const std::vector<std::pair<std::string, std::string>>& targets,
                                          Environment<B>& env) {
    ClosureCertificate out;
    out.product.generator = tau0_name;
    if (targets.empty()) return out;
    if (targets.size() == 1) return commutator_in_normal_closure(targets[0].first, targets[0].second, tau0_name, env);
    for (std::size_t k = 0; k < targets.size(); ++k) {
        auto c = commutator_in_normal_closure(targets[k].first, targets[k].second, tau0_name, env,
                                              "t" + std::to_string(k + 1));
        out.product *= c.product;
        out.atomic_pairs += c.atomic_pairs;
        append(out.trace, c.trace);
    }
    return out;
}

struct VerificationReport {
    bool structural = false;
    bool equal = false;
    std::size_t factors = 0;
    std::string reason;
    bool ok() const { return structural && equal; }
};

/// Checks that every factor has the form g tau0^(+-1) g^-1 with g free of
/// tau0, then evaluates the product and compares it with `target`.
/// Unbound names raise MalformedInput.
template <class B>
VerificationReport verify_certificate_report(const ConjugateProduct& cp, const Environment<B>& env,
                                             const Element<B>& target) {
    VerificationReport rep;
    rep.factors = cp.factors.size();
    if (target.base() != env.base()) throw MalformedInput("target and environment have different bases");
    if (!cp.factors.empty()) env.get(cp.generator);
    for (const auto& f : cp.factors) {
        if (f.sign != 1 && f.sign != -1) {
            rep.reason = "factor sign is not +-1";
            return rep;
        }
        for (const auto& t : f.conjugator.tokens()) {
            env.get(t.name);
            if (t.name == cp.generator) {
                rep.reason = "conjugator mentions the generator";
                return rep;
            }
        }
    }
    if (!cp.factors.empty() && scan_conjugate_form(cp.flatten(), cp.generator) != static_cast<long>(cp.factors.size())) {
        rep.reason = "flattened word is not in conjugate form";
        return rep;
    }
    rep.structural = true;
    rep.equal = evaluate(cp, env) == target;
    if (!rep.equal) rep.reason = "product does not evaluate to the target";
    return rep;
}

template <class B>
bool verify_certificate(const ConjugateProduct& cp, const Environment<B>& env, const Element<B>& target) {
    return verify_certificate_report(cp, env, target).ok();
}

}  // namespace fullgroup
