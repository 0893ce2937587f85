#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fullgroup/certificate.hpp"
#include "fullgroup/codec.hpp"
#include "fullgroup/decomposition.hpp"
#include "fullgroup/json_io.hpp"
#include "fullgroup/oracle.hpp"
#include "fullgroup/random.hpp"
#include "fullgroup/transfer.hpp"

namespace fullgroup {

struct RunConfig {
    BackendId backend{BackendKind::Odometer, 2};
    std::uint64_t seed = 1;
    std::size_t max_depth = 4;
    std::size_t trials = 100;

    void validate() const {
        check_base(backend.base);
        if (max_depth < 1) throw PreconditionViolation("max_depth must be at least 1");
        if (trials < 1) throw PreconditionViolation("trial count must be at least 1");
    }
};

struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t passed = 0;
    bool vacuous = false;
    std::vector<std::string> counterexamples;  // first few, "trial N: ..."

    bool ok() const { return passed == trials; }
};

struct SuiteReport {
    std::string suite;
    RunConfig config;
    std::vector<PropertyResult> properties;

    bool ok() const {
        return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.ok(); });
    }

    Json to_json() const {
        Json props = Json::array();
        for (const auto& p : properties)
            props.push_back({{"name", p.name},
                             {"trials", p.trials},
                             {"passed", p.passed},
                             {"vacuous", p.vacuous},
                             {"counterexamples", p.counterexamples}});
        return {{"format_version", kFormatVersion},
                {"kind", "selftest"},
                {"suite", suite},
                {"backend", config.backend.tag()},
                {"seed", config.seed},
                {"max_depth", config.max_depth},
                {"trials", config.trials},
                {"passed", ok()},
                {"properties", std::move(props)}};
    }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"group-axioms", "measure-invariance", "support-conjugation",
                                                "lemma-transfers",  "swap-gw",            "decomposition",
                                                "split",            "certificates"};
    return names;
}

namespace detail {

using Failure = std::optional<std::string>;

/// Runs `trial` once per index with its own labeled substream, so results do
/// not depend on the order or number of other properties.
class PropertyRunner {
public:
    PropertyRunner(const RunConfig& cfg, std::string suite, std::vector<PropertyResult>& out)
        : cfg_(cfg), root_(Rng(cfg.seed).substream(suite + "/" + cfg.backend.tag())), out_(out) {}

    void run(const std::string& name, std::size_t trials, const std::function<Failure(Rng&)>& trial) {
        PropertyResult r{name, trials, 0, false, {}};
        for (std::size_t i = 0; i < trials; ++i) {
            Rng rng = root_.substream(name + "#" + std::to_string(i));
            Failure f;
            try {
                f = trial(rng);
            } catch (const std::exception& e) {
                f = std::string("exception: ") + e.what();
            }
            if (!f) {
                ++r.passed;
            } else if (r.counterexamples.size() < 5) {
                r.counterexamples.push_back("trial " + std::to_string(i) + ": " + *f);
            }
        }
        out_.push_back(std::move(r));
    }

    void vacuous(const std::string& name, std::size_t trials) {
        out_.push_back(PropertyResult{name, trials, trials, true, {}});
    }

    const RunConfig& cfg() const { return cfg_; }

private:
    RunConfig cfg_;
    Rng root_;
    std::vector<PropertyResult>& out_;
};

inline Failure fail_if(bool bad, const std::string& what) { return bad ? Failure(what) : std::nullopt; }

inline constexpr std::uint64_t kExhaustiveProbe = 4096;

/// b^d, saturating just above kExhaustiveProbe.
inline std::uint64_t word_count(int base, std::size_t d) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d && total <= kExhaustiveProbe; ++i) total *= static_cast<std::uint64_t>(base);
    return total;
}

/// Words of length d for a pointwise check: all of them when there are at
/// most kExhaustiveProbe, otherwise 256 random ones.
inline std::vector<Word> probe_words(Rng& rng, int base, std::size_t d) {
    if (word_count(base, d) <= kExhaustiveProbe) return oracle::all_words(base, d);
    std::vector<Word> out;
    for (int i = 0; i < 256; ++i) out.push_back(random_word(rng, base, d));
    return out;
}

template <class B>
Failure pointwise_equal(Rng& rng, const Element<B>& f, const Element<B>& g, std::size_t d) {
    for (const auto& x : probe_words(rng, f.base(), d)) {
        auto a = oracle::restricted(f.pieces(), x);
        auto b = oracle::restricted(g.pieces(), x);
        if (!a || !b || !(*a == *b)) return "maps differ on [" + x.text() + "]";
    }
    return std::nullopt;
}

template <class B>
void group_axioms(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    const auto D = c.max_depth;
    run.run("associativity", c.trials, [&](Rng& r) {
        auto f = random_element<B>(r, b, D), g = random_element<B>(r, b, D), h = random_element<B>(r, b, D);
        return fail_if(!(compose(compose(f, g), h) == compose(f, compose(g, h))),
                       "(fg)h != f(gh) for " + encode(f) + ", " + encode(g) + ", " + encode(h));
    });
    run.run("identity-laws", c.trials, [&](Rng& r) {
        auto f = random_element<B>(r, b, D);
        auto e = Element<B>::identity(b);
        return fail_if(!(compose(e, f) == f) || !(compose(f, e) == f), "identity law fails for " + encode(f));
    });
    run.run("inverse-laws", c.trials, [&](Rng& r) {
        auto f = random_element<B>(r, b, D);
        return fail_if(!compose(f, inverse(f)).is_identity() || !compose(inverse(f), f).is_identity() ||
                           !(inverse(inverse(f)) == f),
                       "inverse law fails for " + encode(f));
    });
    run.run("equals-vs-oracle", c.trials, [&](Rng& r) -> Failure {
        auto f = random_element<B>(r, b, D);
        auto g = random_element<B>(r, b, D);
        if (r.chance(1, 2)) g = compose(compose(f, g), inverse(g));
        const bool eq = f == g;
        const std::size_t d = std::max(f.max_depth(), g.max_depth());
        auto diff = pointwise_equal(r, f, g, d);
        if (eq && diff) return "equal canonical forms but " + *diff;
        if (!eq && !diff && word_count(b, d) <= kExhaustiveProbe)
            return "oracle equal but canonical forms differ: " + encode(f) + " vs " + encode(g);
        return std::nullopt;
    });
    run.run("compose-vs-oracle", c.trials, [&](Rng& r) -> Failure {
        auto f = random_element<B>(r, b, D), g = random_element<B>(r, b, D);
        auto fg = compose(f, g);
        const std::size_t len = f.max_depth() + g.max_depth() + 2;
        for (int k = 0; k < 16; ++k) {
            const Word x = random_word(r, b, len);
            auto want = oracle::compose_prefix(f, g, x);
            auto got = oracle::image_prefix(fg.pieces(), b, x);
            if (!want || !got || !oracle::compatible(*want, *got))
                return "f(g(" + x.text() + ")) disagrees for " + encode(f) + ", " + encode(g);
            auto back = oracle::image_prefix(inverse(f).pieces(), b, *oracle::image_prefix(f.pieces(), b, x));
            if (!back || !oracle::compatible(*back, x)) return "inverse disagrees pointwise for " + encode(f);
        }
        return std::nullopt;
    });
    run.run("boolean-algebra-vs-bitmap", c.trials, [&](Rng& r) -> Failure {
        auto x = random_clopen(r, b, D), y = random_clopen(r, b, D);
        const std::size_t d = std::max(x.max_depth(), y.max_depth()) + 1;
        auto bx = oracle::bitmap(x, d), by = oracle::bitmap(y, d);
        std::vector<bool> cmp(bx.size()), inter(bx.size()), uni(bx.size()), dif(bx.size());
        std::size_t ones = 0;
        bool sub = true, dis = true;
        for (std::size_t i = 0; i < bx.size(); ++i) {
            cmp[i] = !bx[i];
            inter[i] = bx[i] && by[i];
            uni[i] = bx[i] || by[i];
            dif[i] = bx[i] && !by[i];
            ones += bx[i];
            if (bx[i] && !by[i]) sub = false;
            if (bx[i] && by[i]) dis = false;
        }
        if (oracle::bitmap(complement(x), d) != cmp) return "complement of " + encode(x);
        if (oracle::bitmap(intersect(x, y), d) != inter) return "intersection of " + encode(x) + ", " + encode(y);
        if (oracle::bitmap(unite(x, y), d) != uni) return "union of " + encode(x) + ", " + encode(y);
        if (oracle::bitmap(difference(x, y), d) != dif) return "difference of " + encode(x) + ", " + encode(y);
        if (is_subset(x, y) != sub || disjoint(x, y) != dis) return "subset/disjoint of " + encode(x) + ", " + encode(y);
        const Rational mu(static_cast<std::int64_t>(ones), detail::checked_pow(b, static_cast<int>(d)));
        if (!(measure(x).value() == mu)) return "measure of " + encode(x);
        return std::nullopt;
    });
}

template <class B>
void measure_invariance(PropertyRunner& run) {
    const auto& c = run.cfg();
    if constexpr (!is_odometer<B>) {
        run.vacuous("mu(f(A)) = mu(A)", c.trials);
    } else {
        const int b = c.backend.base;
        run.run("mu(f(A)) = mu(A)", c.trials, [&](Rng& r) -> Failure {
            auto f = random_element<B>(r, b, c.max_depth);
            std::vector<ClopenSet> cyls;
            for (std::size_t d = 0; d <= c.max_depth; ++d)
                for (const auto& w : oracle::all_words(b, d)) cyls.push_back(ClopenSet::cylinder(b, w));
            auto rep = check_measure_invariance(f, cyls);
            if (!rep.passed) return "measure changes on " + encode(*rep.violation) + " under " + encode(f);
            auto x = random_clopen(r, b, c.max_depth);
            return fail_if(!(measure(image_of_clopen(f, x)) == measure(x)), "measure changes on " + encode(x));
        });
    }
}

template <class B>
void support_conjugation(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    const auto D = c.max_depth;
    run.run("supp(g f g^-1) = g(supp f)", c.trials, [&](Rng& r) {
        auto f = random_element<B>(r, b, D), g = random_element<B>(r, b, D);
        return fail_if(!(support(conjugate(g, f)) == image_of_clopen(g, support(f))),
                       "for f = " + encode(f) + ", g = " + encode(g));
    });
    run.run("image-vs-oracle", c.trials, [&](Rng& r) {
        auto f = random_element<B>(r, b, D);
        auto x = random_clopen(r, b, D);
        auto img = image_of_clopen(f, x);
        const std::size_t d = std::max(f.max_depth(), x.max_depth()) + img.max_depth() + 1;
        bool ok = true;
        for (int k = 0; k < 64 && ok; ++k) {
            const Word w = random_word(r, b, d);
            auto y = oracle::image_prefix(f.pieces(), b, w);
            auto in_img = oracle::member(img, *y);
            auto in_x = oracle::member(x, w);
            ok = in_img && in_x && *in_img == *in_x;
        }
        return fail_if(!ok, "image of " + encode(x) + " under " + encode(f));
    });
}

template <class B>
void lemma_transfers(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    const auto D = c.max_depth;
    run.run("comparison", c.trials, [&](Rng& r) -> Failure {
        auto [x, y] = random_transfer_pair<B>(r, b, D);
        if constexpr (!is_odometer<B>) {
            // The full shift compares any A with any nonempty B.
            if (r.chance(1, 3)) x = random_proper_clopen(r, b, D);
        }
        auto u = compare_clopen<B>(x, y);
        if (auto bad = validate_bisection(u)) return "not a bisection: " + bad->describe();
        auto [s, rg] = source_range(u);
        return fail_if(!(s == x) || !is_subset(rg, y), "source/range wrong for " + encode(x) + " -> " + encode(y));
    });
    run.run("full-group-transfer", c.trials, [&](Rng& r) -> Failure {
        auto [x, y] = random_transfer_pair<B>(r, b, D);
        auto t = full_group_transfer<B>(x, y);
        auto rep = check_postconditions(t);
        if (!rep.ok()) return rep.failures.front() + " for " + encode(x) + " -> " + encode(y);
        const bool inside = difference(y, x).is_empty() && !is_subset(x, y);
        if (inside != (t.tag == PostconditionTag::InsideCaseSupportBound))
            return std::string("wrong branch for ") + encode(x) + " -> " + encode(y);
        return std::nullopt;
    });
    run.run("commutator-transfer", c.trials, [&](Rng& r) -> Failure {
        auto [x, y] = random_transfer_pair<B>(r, b, D, 3);
        auto t = commutator_transfer<B>(x, y);
        auto rep = check_postconditions(t);
        if (!rep.ok()) return rep.failures.front() + " for " + encode(x) + " -> " + encode(y);
        if (!(evaluate(t.witness->word(), t.witness_env) == t.element)) return "witness word disagrees";
        return std::nullopt;
    });
}

template <class B>
void swap_gw(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    const auto D = c.max_depth;
    run.run("exact-swap", c.trials, [&](Rng& r) -> Failure {
        auto [x, y] = random_swap_pair<B>(r, b, D);
        auto s = exact_swap_involution<B>(x, y);
        if (!(image_of_clopen(s, x) == y)) return "alpha(A) != B for " + encode(x) + ", " + encode(y);
        if (!compose(s, s).is_identity()) return "not an involution";
        if (!is_subset(support(s), unite(x, y))) return "support escapes A u B";
        return std::nullopt;
    });
    run.run("gw-intertwining", c.trials, [&](Rng& r) -> Failure {
        auto [x, y] = random_swap_pair<B>(r, b, D);
        const int rounds = static_cast<int>(r.between(0, 8));
        auto st = gw_intertwining<B>(x, y, rounds);
        auto rep = check_gw_state(st);
        if (!rep.ok()) return rep.failures.front() + " for " + encode(x) + ", " + encode(y);
        return fail_if(st.round != rounds || st.history.size() != static_cast<std::size_t>(rounds), "round count");
    });
}

template <class B>
Failure check_decomposition(const Element<B>& f, const DecompositionResult<B>& d) {
    if (!(product(d.factors, f.base()) == f)) return "product differs from " + encode(f);
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
        if (d.bounds[i].is_whole()) return "bound " + std::to_string(i) + " is the whole space";
        if (!is_subset(support(d.factors[i]), d.bounds[i])) return "factor support escapes its bound";
        if constexpr (is_odometer<B>) {
            if (!(measure(d.bounds[i]).value() < *d.epsilon)) return "bound measure not below epsilon";
        }
    }
    return std::nullopt;
}

template <class B>
void decomposition(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    run.run("small-support-decomposition", c.trials, [&](Rng& r) -> Failure {
        auto f = random_element<B>(r, b, c.max_depth);
        static const Rational eps[] = {Rational(1, 4), Rational(1, 8), Rational(1, 16)};
        std::optional<Rational> e;
        if constexpr (is_odometer<B>) e = eps[r.below(3)];
        auto d = decompose_small_support(f, e);
        if (f.is_identity() && !d.factors.empty()) return "identity has factors";
        return check_decomposition(f, d);
    });
}

template <class B>
Failure check_split(const Element<B>& tau, const SplitResult<B>& s) {
    if (!(compose(s.tau1, s.tau2) == tau)) return "tau1 tau2 != tau for " + encode(tau);
    if (support(s.tau1).is_whole() || support(s.tau2).is_whole()) return "a support is the whole space";
    if (s.certificate.factors.size() != 2) return "certificate is not two conjugates";
    if (!verify_certificate(s.certificate, s.env, s.tau1)) return "certificate does not evaluate to tau1";
    if (!disjoint(support(s.tau1), difference(s.a, s.a0))) return "supp(tau1) meets A \\ A0";
    if (!disjoint(support(s.tau2), s.a0)) return "supp(tau2) meets A0";
    if (!(evaluate(s.sigma_witness, s.env) == s.env.get("sigma"))) return "sigma witness";
    if (!(evaluate(s.gamma_witness, s.env) == s.env.get("gamma"))) return "gamma witness";
    return std::nullopt;
}

template <class B>
void split(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    run.run("split-nontrivial-support", c.trials, [&](Rng& r) {
        auto tau = random_nontrivial_element<B>(r, b, c.max_depth);
        return check_split(tau, split_nontrivial_support(tau));
    });
}

/// A nontrivial tau0 with tau0^2 != 1, so that flipping the sign of any
/// factor of a certificate changes its value.
template <class B>
Element<B> random_generator(Rng& r, int base, std::size_t depth) {
    for (;;) {
        auto t = random_nontrivial_element<B>(r, base, depth);
        if (!compose(t, t).is_identity()) return t;
    }
}

template <class B>
void certificates(PropertyRunner& run) {
    const auto& c = run.cfg();
    const int b = c.backend.base;
    const std::size_t D = std::min<std::size_t>(c.max_depth, 5);
    run.run("closure-certificate", c.trials, [&](Rng& r) -> Failure {
        Environment<B> env(b);
        env.bind("tau0", random_generator<B>(r, b, D));
        env.bind("alpha", random_element<B>(r, b, D));
        env.bind("beta", random_element<B>(r, b, D));
        auto cert = commutator_in_normal_closure<B>("alpha", "beta", "tau0", env);
        const auto target = commutator(env.get("alpha"), env.get("beta"));
        auto rep = verify_certificate_report(cert.product, env, target);
        if (!rep.ok()) return rep.reason;
        if (scan_conjugate_form(cert.product.flatten(), "tau0") != static_cast<long>(cert.product.factors.size()))
            return "conjugate-form scan";
        if (cert.product.factors.size() != 8 * cert.atomic_pairs) return "factor count";
        if (!cert.product.empty()) {
            auto mutated = cert.product;
            mutated.factors[r.below(mutated.factors.size())].sign *= -1;
            if (verify_certificate(mutated, env, target)) return "sign-flipped certificate still verifies";
        }
        return std::nullopt;
    });
    run.run("normality-certificate", c.trials, [&](Rng& r) -> Failure {
        Environment<B> env(b);
        auto tau = random_nontrivial_element<B>(r, b, D);
        if (support(tau).is_whole()) tau = split_nontrivial_support(tau).tau1;
        env.bind("tau", tau);
        env.bind("alpha", random_element<B>(r, b, D));
        auto nc = normality_certificate<B>("tau", "alpha", env);
        const auto lhs = conjugate(env.get("alpha"), tau);
        const auto w = evaluate(nc.conjugator, env);
        return fail_if(!(conjugate(w, tau) == lhs), "alpha tau alpha^-1 != w tau w^-1");
    });
    run.run("commutator-expansion", c.trials, [&](Rng& r) -> Failure {
        Environment<B> env(b);
        const auto n = static_cast<std::size_t>(r.between(1, 3));
        const auto m = static_cast<std::size_t>(r.between(1, 3));
        std::vector<std::string> gs, hs;
        for (std::size_t i = 0; i < n; ++i) {
            gs.push_back("g" + std::to_string(i + 1));
            env.bind(gs.back(), random_element<B>(r, b, D));
        }
        for (std::size_t j = 0; j < m; ++j) {
            hs.push_back("h" + std::to_string(j + 1));
            env.bind(hs.back(), random_element<B>(r, b, D));
        }
        auto ex = expand_commutator_product(gs, hs);
        return fail_if(!(evaluate(ex.lhs, env) == evaluate(ex.rhs, env)) || ex.terms.size() != n * m,
                       "expansion disagrees");
    });
}

template <class B>
void run_suite(const std::string& suite, PropertyRunner& run) {
    if (suite == "group-axioms") group_axioms<B>(run);
    else if (suite == "measure-invariance") measure_invariance<B>(run);
    else if (suite == "support-conjugation") support_conjugation<B>(run);
    else if (suite == "lemma-transfers") lemma_transfers<B>(run);
    else if (suite == "swap-gw") swap_gw<B>(run);
    else if (suite == "decomposition") decomposition<B>(run);
    else if (suite == "split") split<B>(run);
    else if (suite == "certificates") certificates<B>(run);
    else throw MalformedInput("unknown suite '" + suite + "'");
}

}  // namespace detail

/// Runs a named suite ("all" runs every suite in order) for the configured
/// backend. Reports list properties in execution order.
inline SuiteReport selftest(const std::string& suite, const RunConfig& cfg) {
    cfg.validate();
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw MalformedInput("unknown suite '" + suite + "'");
    SuiteReport rep{suite, cfg, {}};
    const std::vector<std::string> todo = suite == "all" ? suite_names() : std::vector<std::string>{suite};
    for (const auto& s : todo) {
        detail::PropertyRunner run(cfg, s, rep.properties);
        const auto before = rep.properties.size();
        if (cfg.backend.kind == BackendKind::Odometer) detail::run_suite<Odometer>(s, run);
        else detail::run_suite<FullShift>(s, run);
        if (suite == "all")
            for (auto i = before; i < rep.properties.size(); ++i) rep.properties[i].name = s + "/" + rep.properties[i].name;
    }
    return rep;
}

}  // namespace fullgroup
