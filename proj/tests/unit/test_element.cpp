#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fg_test;

namespace {

const auto kSwap00_10 = "odo2:[(00;+1),(01;+0),(10;-1),(11;+0)]";
const auto kShiftTriple = "shift2:[(0>11),(11>0),(10>10)]";

}  // namespace

TEST(Compose, IdentityAndInverse) {
    auto f = odo(kSwap00_10);
    EXPECT_EQ(compose(f, Element<Odometer>::identity(2)), f);
    EXPECT_TRUE(compose(f, inverse(f)).is_identity());
    auto g = shift(kShiftTriple);
    EXPECT_TRUE(compose(inverse(g), g).is_identity());
}

TEST(Compose, AddingMachineSquared) {
    const auto phi = odometer_power(2, 1);
    const auto sq = compose(phi, phi);
    EXPECT_EQ(sq, odometer_power(2, 2));
    const auto refined = refine_bisection(sq.bisection(), 2);
    ASSERT_EQ(refined.pieces.size(), 4u);
    for (const auto& p : refined.pieces) EXPECT_EQ(p.power, 2);
    EXPECT_EQ(image_of_clopen(sq, set("b2:{00}")), set("b2:{01}"));
    // Digit arithmetic oracle at depth 2.
    for (const auto& x : oracle::all_words(2, 2))
        EXPECT_EQ(*oracle::compose_prefix(phi, phi, x), oracle::add_digits(x, 2, 2));
}

TEST(Inverse, Examples) {
    EXPECT_TRUE(inverse(Element<Odometer>::identity(2)).is_identity());
    auto swap = odo("odo2:[(0;+1),(1;-1)]");
    EXPECT_EQ(inverse(swap), swap);
    EXPECT_EQ(inverse(shift(kShiftTriple)), shift("shift2:[(11>0),(0>11),(10>10)]"));
}

TEST(Equals, Examples) {
    EXPECT_EQ(Element<Odometer>::identity(2),
              odo("odo2:[(000;+0),(001;+0),(010;+0),(011;+0),(100;+0),(101;+0),(110;+0),(111;+0)]"));
    EXPECT_NE(odometer_power(2, 1), odometer_power(2, -1));
    const auto a = odo(kSwap00_10);
    const auto b = odo("odo2:[(000;+1),(001;+1),(01;+0),(100;-1),(101;-1),(11;+0)]");
    EXPECT_EQ(a, b);
    EXPECT_TRUE(oracle::equal(a, b));
    EXPECT_EQ(encode(a), encode(b));
}

TEST(Support, Examples) {
    EXPECT_TRUE(support(Element<Odometer>::identity(2)).is_empty());
    EXPECT_EQ(support(odo(kSwap00_10)), set("b2:{00,10}"));
    EXPECT_EQ(support(shift(kShiftTriple)), set("b2:{0,11}"));
    EXPECT_TRUE(support(odometer_power(3, 1)).is_whole());
}

TEST(Commutator, Examples) {
    auto f = shift(kShiftTriple);
    EXPECT_TRUE(commutator(f, f).is_identity());
    EXPECT_TRUE(commutator(f, Element<FullShift>::identity(2)).is_identity());
    auto a = odo(kSwap00_10);
    auto b = odo("odo2:[(01;+1),(11;-1),(00;+0),(10;+0)]");
    ASSERT_TRUE(disjoint(support(a), support(b)));
    EXPECT_TRUE(commutator(a, b).is_identity());
    EXPECT_FALSE(commutator(a, odometer_power(2, 1)).is_identity());
}

TEST(Image, Examples) {
    EXPECT_EQ(image_of_clopen(Element<Odometer>::identity(2), set("b2:{01}")), set("b2:{01}"));
    const auto phi = odometer_power(2, 1);
    EXPECT_EQ(image_of_clopen(phi, set("b2:{0}")), set("b2:{1}"));
    EXPECT_EQ(image_of_clopen(phi, set("b2:{1}")), set("b2:{0}"));
    EXPECT_EQ(preimage_of_clopen(phi, set("b2:{0}")), set("b2:{1}"));
}

TEST(MeasureInvariance, Examples) {
    EXPECT_TRUE(check_measure_invariance(Element<Odometer>::identity(2), {set("b2:{01}")}).passed);
    const auto phi = odometer_power(2, 1);
    EXPECT_EQ(measure(image_of_clopen(phi, set("b2:{01}"))).value(), Rational(1, 4));
    auto rep = check_measure_invariance(shift(kShiftTriple), {set("b2:{0}")});
    EXPECT_TRUE(rep.passed);
    EXPECT_TRUE(rep.vacuous);
}

TEST(Element, RejectsNonPartitions) {
    EXPECT_THROW(odo("odo2:[(0;+1)]"), MalformedInput);
    EXPECT_THROW(shift("shift2:[(0>1),(1>11)]"), MalformedInput);
    EXPECT_THROW(compose(odometer_power(2, 1), odometer_power(3, 1)), MalformedInput);
}

TEST(Patch, AgreesOnEachRegion) {
    const auto phi = odometer_power(2, 1);
    const auto swap = odo("odo2:[(0;+1),(1;-1)]");
    // phi on [0] (image [1]) and swap on [1] (image [0]).
    auto p = patch(phi, set("b2:{0}"), swap, set("b2:{1}"));
    EXPECT_EQ(p, swap);
}

template <class B>
void check_axioms_against_oracle(int base, const std::string& label) {
    Rng r = rng_for(label);
    const auto e = Element<B>::identity(base);
    for (int t = 0; t < 300; ++t) {
        auto f = random_element<B>(r, base, 5), g = random_element<B>(r, base, 5), h = random_element<B>(r, base, 5);
        ASSERT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
        ASSERT_EQ(compose(e, f), f);
        ASSERT_TRUE(compose(f, inverse(f)).is_identity());
        ASSERT_EQ(f == g, oracle::equal(f, g)) << encode(f) << " vs " << encode(g);
        const auto same = compose(compose(g, f), inverse(g));
        ASSERT_EQ(f == same, oracle::equal(f, same));
        // Pointwise composition on random long words.
        const auto fg = compose(f, g);
        for (int k = 0; k < 8; ++k) {
            const Word x = random_word(r, base, f.max_depth() + g.max_depth() + 1);
            auto want = oracle::compose_prefix(f, g, x);
            auto got = oracle::image_prefix(fg.pieces(), base, x);
            ASSERT_TRUE(want && got && oracle::compatible(*want, *got));
        }
        // supp(g f g^-1) = g(supp f)
        ASSERT_EQ(support(conjugate(g, f)), image_of_clopen(g, support(f)));
        if constexpr (is_odometer<B>) {
            auto x = random_clopen(r, base, 5);
            ASSERT_EQ(measure(image_of_clopen(f, x)), measure(x));
        }
    }
}

TEST(ElementProperty, OdometerBase2) { check_axioms_against_oracle<Odometer>(2, "axioms-odo2"); }
TEST(ElementProperty, OdometerBase3) { check_axioms_against_oracle<Odometer>(3, "axioms-odo3"); }
TEST(ElementProperty, ShiftBase2) { check_axioms_against_oracle<FullShift>(2, "axioms-shift2"); }
TEST(ElementProperty, ShiftBase3) { check_axioms_against_oracle<FullShift>(3, "axioms-shift3"); }

TEST(ElementProperty, ImageMatchesExhaustiveOracle) {
    Rng r = rng_for("image-exhaustive");
    for (int t = 0; t < 200; ++t) {
        auto f = random_element<Odometer>(r, 2, 4);
        auto x = random_clopen(r, 2, 4);
        auto img = image_of_clopen(f, x);
        const std::size_t d = std::max({f.max_depth(), x.max_depth(), img.max_depth()}) + 1;
        ASSERT_TRUE(oracle::image_matches(f, x, img, d)) << encode(f) << " on " << encode(x);
    }
}
