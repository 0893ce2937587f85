#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fg_test;

TEST(CommutatorExpansion, SingleTermIsTheCommutator) {
    auto ex = expand_commutator_product({"g"}, {"h"});
    EXPECT_EQ(ex.rhs, GroupWord::commutator("g", "h"));
    EXPECT_EQ(ex.lhs, GroupWord::commutator("g", "h"));
    ASSERT_EQ(ex.terms.size(), 1u);
    EXPECT_TRUE(ex.terms[0].conjugator.empty());
}

TEST(CommutatorExpansion, TwoByOne) {
    auto ex = expand_commutator_product({"g1", "g2"}, {"h"});
    EXPECT_EQ(ex.rhs.text(), "g1*g2*h*g2^-1*h^-1*g1^-1*g1*h*g1^-1*h^-1");
    EXPECT_EQ(ex.rhs, GroupWord::letter("g1") * GroupWord::commutator("g2", "h") * GroupWord::letter("g1", -1) *
                          GroupWord::commutator("g1", "h"));
}

TEST(CommutatorExpansion, EmptyListsRejected) {
    EXPECT_THROW(expand_commutator_product({}, {"h"}), PreconditionViolation);
}

template <class B>
void check_expansions(int base, const std::string& label) {
    Rng r = rng_for(label);
    for (int t = 0; t < 50; ++t) {
        Environment<B> env(base);
        for (const char* n : {"g1", "g2", "h1", "h2"}) env.bind(n, random_element<B>(r, base, 4));
        auto ex = expand_commutator_product({"g1", "g2"}, {"h1", "h2"});
        const auto direct = commutator(compose(env.get("g1"), env.get("g2")), compose(env.get("h1"), env.get("h2")));
        ASSERT_EQ(evaluate(ex.lhs, env), direct);
        ASSERT_EQ(evaluate(ex.rhs, env), direct);
        ASSERT_EQ(ex.terms.size(), 4u);
    }
}

TEST(CommutatorExpansion, TwoByTwoInRandomEnvironments) {
    check_expansions<Odometer>(2, "expansion-odo");
    check_expansions<FullShift>(3, "expansion-shift");
}

TEST(NormalityCertificate, IdentityConjugatorForIdentity) {
    Environment<Odometer> env(2);
    env.bind("tau", odo("odo2:[(00;+1),(10;-1),(01;+0),(11;+0)]"));
    env.bind("alpha", Element<Odometer>::identity(2));
    EXPECT_TRUE(normality_certificate<Odometer>("tau", "alpha", env).conjugator.empty());
}

TEST(NormalityCertificate, DisjointSupports) {
    Environment<Odometer> env(2);
    const auto tau = odo("odo2:[(00;+1),(10;-1),(01;+0),(11;+0)]");
    env.bind("tau", tau);
    env.bind("alpha", odo("odo2:[(01;+1),(11;-1),(00;+0),(10;+0)]"));
    auto nc = normality_certificate<Odometer>("tau", "alpha", env);
    const auto w = evaluate(nc.conjugator, env);
    EXPECT_EQ(conjugate(w, tau), tau);
    EXPECT_EQ(conjugate(env.get("alpha"), tau), tau);
}

TEST(NormalityCertificate, WholeSupportRejected) {
    Environment<Odometer> env(2);
    env.bind("tau", odometer_power(2, 1));
    env.bind("alpha", odometer_power(2, 1));
    EXPECT_THROW(normality_certificate<Odometer>("tau", "alpha", env), PreconditionViolation);
}

template <class B>
void check_normality(int base, const std::string& label) {
    Rng r = rng_for(label);
    for (int t = 0; t < 60; ++t) {
        Environment<B> env(base);
        auto tau = random_nontrivial_element<B>(r, base, 5);
        if (support(tau).is_whole()) tau = split_nontrivial_support(tau).tau1;
        env.bind("tau", tau);
        env.bind("alpha", random_element<B>(r, base, 5));
        auto nc = normality_certificate<B>("tau", "alpha", env);
        for (const auto& tok : nc.conjugator.tokens()) ASSERT_NE(tok.name, "tau");
        ASSERT_EQ(conjugate(evaluate(nc.conjugator, env), tau), conjugate(env.get("alpha"), tau));
    }
}

TEST(NormalityCertificate, RandomOdometer) { check_normality<Odometer>(2, "normality-odo"); }
TEST(NormalityCertificate, RandomShift) { check_normality<FullShift>(2, "normality-shift"); }

TEST(ClosureCertificate, CommutingPairGivesEmptyProduct) {
    Environment<FullShift> env(2);
    env.bind("tau0", shift("shift2:[(0>1),(1>0)]"));
    env.bind("alpha", shift("shift2:[(0>11),(11>0),(10>10)]"));
    auto c = commutator_in_normal_closure<FullShift>("alpha", "alpha", "tau0", env);
    EXPECT_TRUE(c.product.empty());
    EXPECT_TRUE(verify_certificate(c.product, env, Element<FullShift>::identity(2)));
}

TEST(ClosureCertificate, AtomicPairHasEightFactors) {
    Environment<FullShift> env(2);
    env.bind("tau0", shift("shift2:[(0>1),(1>0)]"));
    env.bind("alpha", shift("shift2:[(00>01),(01>00),(1>1)]"));
    env.bind("beta", shift("shift2:[(01>10),(10>01),(00>00),(11>11)]"));
    const auto target = commutator(env.get("alpha"), env.get("beta"));
    ASSERT_FALSE(target.is_identity());
    auto c = commutator_in_normal_closure<FullShift>("alpha", "beta", "tau0", env);
    EXPECT_EQ(c.atomic_pairs, 1u);
    EXPECT_EQ(c.product.factors.size(), 8u);
    EXPECT_EQ(scan_conjugate_form(c.product.flatten(), "tau0"), 8);
    EXPECT_TRUE(verify_certificate(c.product, env, target));
}

TEST(ClosureCertificate, IdentityGeneratorRejected) {
    Environment<Odometer> env(2);
    env.bind("tau0", Element<Odometer>::identity(2));
    env.bind("alpha", odometer_power(2, 1));
    EXPECT_THROW(commutator_in_normal_closure<Odometer>("alpha", "alpha", "tau0", env), PreconditionViolation);
}

TEST(SimplicityCertificate, EmptyTargetList) {
    Environment<Odometer> env(2);
    env.bind("tau0", odometer_power(2, 1));
    auto c = simplicity_certificate<Odometer>("tau0", {}, env);
    EXPECT_TRUE(c.product.empty());
    EXPECT_TRUE(verify_certificate(c.product, env, Element<Odometer>::identity(2)));
}

TEST(SimplicityCertificate, SingleTargetDelegates) {
    Rng r = rng_for("simplicity-single");
    Environment<Odometer> env(2), env2(2);
    for (const char* n : {"tau0", "alpha", "beta"}) {
        auto e = random_nontrivial_element<Odometer>(r, 2, 4);
        env.bind(n, e);
        env2.bind(n, e);
    }
    auto a = simplicity_certificate<Odometer>("tau0", {{"alpha", "beta"}}, env);
    auto b = commutator_in_normal_closure<Odometer>("alpha", "beta", "tau0", env2);
    EXPECT_EQ(a.product, b.product);
}

TEST(SimplicityCertificate, TwoCommutatorsOnTheShift) {
    Rng r = rng_for("simplicity-two");
    Environment<FullShift> env(2);
    auto tau0 = random_nontrivial_element<FullShift>(r, 2, 4);
    env.bind("tau0", tau0);
    for (const char* n : {"a1", "b1", "a2", "b2"}) env.bind(n, random_element<FullShift>(r, 2, 4));
    auto c = simplicity_certificate<FullShift>("tau0", {{"a1", "b1"}, {"a2", "b2"}}, env);
    const auto target = compose(commutator(env.get("a1"), env.get("b1")), commutator(env.get("a2"), env.get("b2")));
    EXPECT_TRUE(verify_certificate(c.product, env, target));
}

TEST(VerifyCertificate, IdentityAgainstIdentity) {
    Environment<FullShift> env(2);
    env.bind("tau0", shift("shift2:[(0>1),(1>0)]"));
    EXPECT_TRUE(verify_certificate(ConjugateProduct{"tau0", {}}, env, Element<FullShift>::identity(2)));
}

TEST(VerifyCertificate, RejectsGeneratorInsideConjugator) {
    Environment<Odometer> env(2);
    env.bind("t", odometer_power(2, 1));
    ConjugateProduct cp{"t", {{GroupWord::letter("t"), 1}}};
    auto rep = verify_certificate_report(cp, env, odometer_power(2, 1));
    EXPECT_FALSE(rep.structural);
    EXPECT_FALSE(rep.ok());
}

TEST(VerifyCertificate, UnboundNameIsMalformed) {
    Environment<Odometer> env(2);
    env.bind("t", odometer_power(2, 1));
    ConjugateProduct cp{"t", {{GroupWord::letter("g"), 1}}};
    EXPECT_THROW(verify_certificate(cp, env, odometer_power(2, 1)), MalformedInput);
}

template <class B>
void check_certificates(int base, const std::string& label, int trials) {
    Rng r = rng_for(label);
    for (int t = 0; t < trials; ++t) {
        Environment<B> env(base);
        auto tau0 = random_nontrivial_element<B>(r, base, 4);
        while (compose(tau0, tau0).is_identity()) tau0 = random_nontrivial_element<B>(r, base, 4);
        env.bind("tau0", tau0);
        env.bind("alpha", random_element<B>(r, base, 4));
        env.bind("beta", random_element<B>(r, base, 4));
        const auto target = commutator(env.get("alpha"), env.get("beta"));
        auto c = commutator_in_normal_closure<B>("alpha", "beta", "tau0", env);
        auto rep = verify_certificate_report(c.product, env, target);
        ASSERT_TRUE(rep.ok()) << rep.reason;
        ASSERT_EQ(scan_conjugate_form(c.product.flatten(), "tau0"), static_cast<long>(c.product.factors.size()));
        if (c.product.empty()) continue;
        // tau0^2 != 1, so flipping any one sign changes the product.
        auto mutated = c.product;
        mutated.factors[r.below(mutated.factors.size())].sign *= -1;
        ASSERT_FALSE(verify_certificate(mutated, env, target));
    }
}

TEST(CertificateProperty, OdometerBase2) { check_certificates<Odometer>(2, "cert-odo2", 40); }
TEST(CertificateProperty, OdometerBase3) { check_certificates<Odometer>(3, "cert-odo3", 15); }
TEST(CertificateProperty, ShiftBase2) { check_certificates<FullShift>(2, "cert-shift2", 40); }
TEST(CertificateProperty, ShiftBase3) { check_certificates<FullShift>(3, "cert-shift3", 15); }

TEST(ConjugateProduct, FlattenAndScan) {
    ConjugateProduct cp{"t", {{GroupWord::parse("a*b"), 1}, {GroupWord{}, -1}}};
    EXPECT_EQ(cp.flatten().text(), "a*b*t*b^-1*a^-1*t^-1");
    EXPECT_EQ(scan_conjugate_form(cp.flatten(), "t"), 2);
    EXPECT_EQ(scan_conjugate_form(GroupWord::parse("a*t*a"), "t"), -1);
    EXPECT_EQ(cp.inverse().inverse(), cp);
}
