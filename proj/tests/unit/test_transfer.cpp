#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fg_test;

TEST(FullGroupTransfer, OdometerSwap) {
    auto t = full_group_transfer<Odometer>(set("b2:{00}"), set("b2:{1}"));
    EXPECT_EQ(t.tag, PostconditionTag::InvolutionSmallSupport);
    EXPECT_EQ(t.element, odo("odo2:[(00;+1),(10;-1),(01;+0),(11;+0)]"));
    EXPECT_TRUE(compose(t.element, t.element).is_identity());
    EXPECT_EQ(support(t.element), set("b2:{00,10}"));
    EXPECT_TRUE(check_postconditions(t).ok());
}

TEST(FullGroupTransfer, AlreadyInsideIsIdentity) {
    auto t = full_group_transfer<Odometer>(set("b2:{00}"), set("b2:{0}"));
    EXPECT_TRUE(t.element.is_identity());
    auto s = full_group_transfer<FullShift>(set("b2:{01}"), set("b2:{01}"));
    EXPECT_TRUE(s.element.is_identity());
}

// B inside A on the full shift. The element listed here is one valid answer;
// the library builds a different one, so both are held to the same
// postconditions.
TEST(FullGroupTransfer, ShiftInsideCase) {
    const auto a = set("b2:{0}"), b = set("b2:{00}");
    const auto listed = shift("shift2:[(0>00),(100>01),(101>10),(110>110),(111>111)]");
    EXPECT_EQ(image_of_clopen(listed, a), b);
    EXPECT_EQ(support(listed), set("b2:{0,10}"));
    EXPECT_FALSE(unite(a, support(listed)).is_whole());
    EXPECT_TRUE(check_postconditions(TransferResult<FullShift>{a, b, listed, std::nullopt, Environment<FullShift>(2),
                                                               PostconditionTag::InsideCaseSupportBound})
                    .ok());

    auto t = full_group_transfer<FullShift>(a, b);
    EXPECT_EQ(t.tag, PostconditionTag::InsideCaseSupportBound);
    EXPECT_TRUE(is_subset(image_of_clopen(t.element, a), b));
    EXPECT_FALSE(unite(a, support(t.element)).is_whole());
}

TEST(FullGroupTransfer, PostconditionCheckCatchesBadElement) {
    // phi moves [00] to [10], inside B, but is not an involution.
    TransferResult<Odometer> t{set("b2:{00}"), set("b2:{1}"), odometer_power(2, 1), std::nullopt,
                               Environment<Odometer>(2), PostconditionTag::InvolutionSmallSupport};
    EXPECT_FALSE(check_postconditions(t).ok());
}

TEST(FullGroupTransfer, OdometerNeedsRoom) {
    EXPECT_THROW(full_group_transfer<Odometer>(set("b2:{0}"), set("b2:{1}")), PreconditionViolation);
}

TEST(CommutatorTransfer, OdometerThreeCycle) {
    const auto a = set("b2:{000}"), b = set("b2:{1}");
    auto t = commutator_transfer<Odometer>(a, b);
    ASSERT_TRUE(t.witness);
    EXPECT_EQ(t.tag, PostconditionTag::CommutatorCyclic);
    const auto& g = t.element;
    const auto g1 = image_of_clopen(g, a), g2 = image_of_clopen(g, g1);
    EXPECT_TRUE(is_subset(g1, b));
    EXPECT_TRUE(is_subset(g2, b));
    EXPECT_EQ(image_of_clopen(g, g2), a);
    EXPECT_TRUE(disjoint(a, g1));
    EXPECT_TRUE(disjoint(g1, g2));
    EXPECT_TRUE(is_subset(support(g), unite(unite(a, g1), g2)));
    // gamma = alpha beta alpha^-1 beta^-1 = beta alpha for the two involutions.
    const auto& alpha = t.witness_env.get("alpha");
    const auto& beta = t.witness_env.get("beta");
    EXPECT_TRUE(compose(alpha, alpha).is_identity());
    EXPECT_TRUE(compose(beta, beta).is_identity());
    EXPECT_EQ(g, commutator(alpha, beta));
    EXPECT_EQ(g, compose(beta, alpha));
    EXPECT_EQ(evaluate(*t.witness, t.witness_env), g);
}

TEST(CommutatorTransfer, EmptySourceIsIdentity) {
    auto t = commutator_transfer<Odometer>(ClopenSet::empty(2), set("b2:{1}"));
    EXPECT_TRUE(t.element.is_identity());
    ASSERT_TRUE(t.witness);
    EXPECT_TRUE(t.witness->commutators.empty());
}

TEST(CommutatorTransfer, OdometerNeedsThreeTimesTheMeasure) {
    EXPECT_THROW(commutator_transfer<Odometer>(set("b2:{00}"), set("b2:{1}")), PreconditionViolation);
}

TEST(ExactSwap, Examples) {
    EXPECT_EQ(exact_swap_involution<Odometer>(set("b2:{00}"), set("b2:{10}")),
              odo("odo2:[(00;+1),(10;-1),(01;+0),(11;+0)]"));
    EXPECT_TRUE(exact_swap_involution<Odometer>(set("b2:{01}"), set("b2:{01}")).is_identity());
    EXPECT_EQ(exact_swap_involution<FullShift>(set("b2:{0}"), set("b2:{1}")), shift("shift2:[(0>1),(1>0)]"));
}

TEST(ExactSwap, Obstructions) {
    EXPECT_THROW(exact_swap_involution<Odometer>(set("b2:{00}"), set("b2:{1}")), PreconditionViolation);
    // Two cylinders against one: the counts differ mod b-1 = 2.
    EXPECT_THROW(exact_swap_involution<FullShift>(set("b3:{00,01}"), set("b3:{1}")), PreconditionViolation);
    EXPECT_NO_THROW(exact_swap_involution<FullShift>(set("b3:{00,01,02}"), set("b3:{1}")));
}

TEST(GWIntertwining, ZeroRounds) {
    auto st = gw_intertwining<Odometer>(set("b2:{00}"), set("b2:{10}"), 0);
    EXPECT_TRUE(st.partial.is_identity());
    EXPECT_EQ(st.residual_a, set("b2:{00}"));
    EXPECT_EQ(st.residual_b, set("b2:{10}"));
}

TEST(GWIntertwining, ThreeRounds) {
    const auto a = set("b2:{00}"), b = set("b2:{10}");
    auto st = gw_intertwining<Odometer>(a, b, 3);
    EXPECT_TRUE(check_gw_state(st).ok());
    EXPECT_LT(diameter_bound(st.residual_a).value(), Rational(1, 4));
    EXPECT_LT(diameter_bound(st.residual_b).value(), Rational(1, 4));
    const auto done_a = difference(a, st.residual_a), done_b = difference(b, st.residual_b);
    EXPECT_EQ(image_of_clopen(st.partial, done_a), done_b);
    EXPECT_EQ(image_of_clopen(st.partial, done_b), done_a);
    EXPECT_EQ(measure(st.residual_a), measure(st.residual_b));
}

template <class B>
void check_prefix_property(const ClopenSet& a, const ClopenSet& b) {
    auto prev = gw_intertwining<B>(a, b, 0);
    for (int k = 1; k <= 6; ++k) {
        auto next = gw_intertwining<B>(a, b, k);
        const auto settled = unite(difference(difference(a, b), prev.residual_a), difference(difference(b, a), prev.residual_b));
        // partial_k^-1 partial_{k+1} does nothing on what round k settled.
        ASSERT_TRUE(disjoint(support(compose(inverse(prev.partial), next.partial)), settled)) << "round " << k;
        prev = std::move(next);
    }
}

TEST(GWIntertwining, LaterRoundsExtendEarlierOnes) {
    check_prefix_property<Odometer>(set("b2:{00}"), set("b2:{10}"));
    check_prefix_property<Odometer>(set("b3:{0}"), set("b3:{1}"));
    check_prefix_property<FullShift>(set("b2:{0}"), set("b2:{11}"));
    check_prefix_property<FullShift>(set("b3:{0,11}"), set("b3:{2}"));
}

TEST(GWIntertwining, Preconditions) {
    EXPECT_THROW(gw_intertwining<Odometer>(set("b2:{00}"), set("b2:{1}"), 2), PreconditionViolation);
    EXPECT_THROW(gw_intertwining<Odometer>(set("b2:{0}"), set("b2:{0}"), 2), PreconditionViolation);
    EXPECT_THROW(gw_intertwining<Odometer>(set("b2:{00}"), set("b2:{10}"), -1), PreconditionViolation);
}

template <class B>
void check_random_transfers(int base, const std::string& label) {
    Rng r = rng_for(label);
    for (int t = 0; t < 200; ++t) {
        auto [x, y] = random_transfer_pair<B>(r, base, 5);
        auto ft = full_group_transfer<B>(x, y);
        ASSERT_TRUE(check_postconditions(ft).ok()) << encode(x) << " -> " << encode(y);
        auto [p, q] = random_transfer_pair<B>(r, base, 5, 3);
        auto ct = commutator_transfer<B>(p, q);
        ASSERT_TRUE(check_postconditions(ct).ok()) << encode(p) << " -> " << encode(q);
        auto [s, u] = random_swap_pair<B>(r, base, 5);
        auto sw = exact_swap_involution<B>(s, u);
        ASSERT_EQ(image_of_clopen(sw, s), u);
        ASSERT_TRUE(compose(sw, sw).is_identity());
        ASSERT_EQ(support(sw), difference(unite(s, u), intersect(s, u)));
        auto st = gw_intertwining<B>(s, u, static_cast<int>(r.between(0, 8)));
        ASSERT_TRUE(check_gw_state(st).ok()) << encode(s) << ", " << encode(u);
    }
}

TEST(TransferProperty, OdometerBase2) { check_random_transfers<Odometer>(2, "transfer-odo2"); }
TEST(TransferProperty, OdometerBase3) { check_random_transfers<Odometer>(3, "transfer-odo3"); }
TEST(TransferProperty, ShiftBase2) { check_random_transfers<FullShift>(2, "transfer-shift2"); }
TEST(TransferProperty, ShiftBase3) { check_random_transfers<FullShift>(3, "transfer-shift3"); }
