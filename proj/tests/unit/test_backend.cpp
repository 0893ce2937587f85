#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace fg_test;

TEST(OdometerPiece, AddsWithoutCarry) {
    const OdometerPiece p{word("00"), 3};
    EXPECT_EQ(piece_apply(p, word("00"), 2), word("11"));
    EXPECT_EQ(odometer_add(word("00"), 3, 2).second, 0);
}

TEST(OdometerPiece, CarriesIntoTheTail) {
    const OdometerPiece p{word("11"), 1};
    EXPECT_EQ(piece_apply(p, word("11"), 2), word("00"));
    EXPECT_EQ(odometer_add(word("11"), 1, 2).second, 1);
    EXPECT_EQ(odometer_add(word("00"), -1, 2), std::make_pair(word("11"), std::int64_t{-1}));
}

TEST(ShiftPiece, ExchangesPrefix) {
    const ShiftPiece p{word("0"), word("110")};
    EXPECT_EQ(piece_apply(p, word("01"), 2), word("1101"));
    EXPECT_THROW(piece_apply(p, word("1"), 2), PreconditionViolation);
}

TEST(ValidateBisection, Examples) {
    Bisection<FullShift> ok{2, {{word("0"), word("11")}, {word("11"), word("0")}, {word("10"), word("10")}}};
    EXPECT_FALSE(validate_bisection(ok));

    Bisection<FullShift> bad{2, {{word("0"), word("1")}, {word("10"), word("11")}}};
    auto v = validate_bisection(bad);
    ASSERT_TRUE(v);
    EXPECT_EQ(v->side, BisectionViolation::Side::Range);
    EXPECT_EQ(v->first, 0u);
    EXPECT_EQ(v->second, 1u);

    Bisection<Odometer> swap{2, {{word("0"), 1}, {word("1"), -1}}};
    EXPECT_FALSE(validate_bisection(swap));
    auto [s, r] = source_range(swap);
    EXPECT_TRUE(s.is_whole());
    EXPECT_TRUE(r.is_whole());
    auto e = Element<Odometer>::from_bisection(swap);
    EXPECT_EQ(image_of_clopen(e, set("b2:{0}")), set("b2:{1}"));
    EXPECT_EQ(image_of_clopen(e, set("b2:{1}")), set("b2:{0}"));
}

TEST(SourceRange, Examples) {
    auto [s0, r0] = source_range(Bisection<Odometer>{2, {}});
    EXPECT_TRUE(s0.is_empty());
    EXPECT_TRUE(r0.is_empty());

    auto [s1, r1] = source_range(Bisection<Odometer>{2, {{word("00"), 1}}});
    EXPECT_EQ(s1, set("b2:{00}"));
    EXPECT_EQ(r1, set("b2:{10}"));

    auto [s2, r2] = source_range(Bisection<FullShift>{2, {{word("0"), word("11")}, {word("11"), word("0")}, {word("10"), word("10")}}});
    EXPECT_TRUE(s2.is_whole());
    EXPECT_TRUE(r2.is_whole());
}

TEST(RefineBisection, Examples) {
    Bisection<Odometer> phi{2, {{Word{}, 1}}};
    auto r = refine_bisection(phi, 1);
    EXPECT_EQ(r, (Bisection<Odometer>{2, {{word("0"), 1}, {word("1"), 1}}}));
    EXPECT_EQ(Element<Odometer>::from_bisection(r), odometer_power(2, 1));

    Bisection<FullShift> flip{2, {{word("0"), word("1")}}};
    EXPECT_EQ(refine_bisection(flip, 2),
              (Bisection<FullShift>{2, {{word("00"), word("10")}, {word("01"), word("11")}}}));

    EXPECT_EQ(refine_bisection(r, 1), r);
}

TEST(CompareClopen, OdometerExample) {
    auto u = compare_clopen<Odometer>(set("b2:{00}"), set("b2:{1}"));
    EXPECT_EQ(u, (Bisection<Odometer>{2, {{word("00"), 1}}}));
    EXPECT_EQ(encode(u), "odo2:[(00;+1)]");
    EXPECT_TRUE(compare_clopen<Odometer>(ClopenSet::empty(2), set("b2:{1}")).pieces.empty());
    EXPECT_THROW(compare_clopen<Odometer>(set("b2:{0}"), set("b2:{1}")), PreconditionViolation);
}

TEST(CompareClopen, ShiftExample) {
    auto u = compare_clopen<FullShift>(set("b2:{0}"), set("b2:{11}"));
    EXPECT_EQ(u, (Bisection<FullShift>{2, {{word("0"), word("110")}}}));
    // Any nonempty target works on the full shift, even a smaller one.
    auto big = compare_clopen<FullShift>(ClopenSet::whole(3), set("b3:{2}"));
    auto [s, r] = source_range(big);
    EXPECT_TRUE(s.is_whole());
    EXPECT_TRUE(is_subset(r, set("b3:{2}")));
}

template <class B>
void check_random_comparisons(int base, const std::string& label) {
    Rng r = rng_for(label);
    for (int t = 0; t < 500; ++t) {
        auto [x, y] = random_transfer_pair<B>(r, base, 6);
        auto u = compare_clopen<B>(x, y);
        ASSERT_FALSE(validate_bisection(u)) << encode(x) << " -> " << encode(y);
        auto [s, rg] = source_range(u);
        ASSERT_EQ(s, x);
        ASSERT_TRUE(is_subset(rg, y));
        for (const auto& p : u.pieces) {
            if constexpr (is_odometer<B>) {
                // Depth is preserved, hence measure.
                ASSERT_EQ(piece_range(p, base).size(), p.source.size());
            }
        }
    }
}

TEST(CompareClopenProperty, OdometerBase2) { check_random_comparisons<Odometer>(2, "compare-odo2"); }
TEST(CompareClopenProperty, OdometerBase3) { check_random_comparisons<Odometer>(3, "compare-odo3"); }
TEST(CompareClopenProperty, ShiftBase2) { check_random_comparisons<FullShift>(2, "compare-shift2"); }
TEST(CompareClopenProperty, ShiftBase3) { check_random_comparisons<FullShift>(3, "compare-shift3"); }

// A nonzero power moves every point of its cylinder: no finite word is
// fixed once it is longer than the source.
TEST(PieceProperty, OdometerPiecesAreFree) {
    Rng r = rng_for("odometer-free");
    for (int t = 0; t < 300; ++t) {
        const int b = 2 + t % 2;
        const OdometerPiece p{random_word(r, b, static_cast<std::size_t>(r.between(0, 3))), r.between(-20, 20)};
        if (p.power == 0) continue;
        for (int k = 0; k < 8; ++k) {
            // Deep enough that the power cannot wrap around to itself.
            const Word x = p.source + random_word(r, b, 8);
            ASSERT_NE(oracle::add_digits(x, p.power, b), x);
            ASSERT_EQ(oracle::add_digits(x, p.power, b), piece_apply(p, x, b));
        }
    }
}
