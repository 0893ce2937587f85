#include <gtest/gtest.h>

#include "helpers.hpp"
#include "fullgroup/json_io.hpp"

using namespace fg_test;

TEST(Codec, ClopenText) {
    EXPECT_EQ(encode(set("b2:{01, 0}")), "b2:{0}");
    EXPECT_EQ(encode(ClopenSet::whole(3)), "b3:{ε}");
    EXPECT_EQ(encode(ClopenSet::empty(2)), "b2:{}");
    EXPECT_TRUE(set("b2:{ε}").is_whole());
    EXPECT_TRUE(set("b2:{}").is_empty());
}

TEST(Codec, MalformedClopen) {
    for (const char* bad : {"", "b2", "b2:{", "{0}", "b2:{2}", "b1:{0}", "b2:{0,,1}", "bx:{0}"})
        EXPECT_THROW(parse_clopen(bad), MalformedInput) << bad;
}

TEST(Codec, ElementText) {
    EXPECT_EQ(encode(odometer_power(2, 1)), "elem:odo2:[(ε;+1)]");
    EXPECT_EQ(encode(shift("shift2:[(1>0),(0>1)]")), "elem:shift2:[(0>1),(1>0)]");
    EXPECT_EQ(odo("elem:odo3:[(ε;-2)]"), odometer_power(3, -2));
}

TEST(Codec, MalformedElements) {
    for (const char* bad : {"odo2:", "odo2:[(0;+1)", "odo2:[(0+1)]", "odo2:[(0;x)]", "shift2:[(0;1)]", "odo2:[(0;+1),(0;-1)]",
                            "odo0:[(ε;+1)]", "odo2:[(0;+1)]"})
        EXPECT_THROW(odo(bad), MalformedInput) << bad;
    EXPECT_THROW(shift("shift2:[(0>1),(10>11)]"), MalformedInput);
    EXPECT_THROW(odo("shift2:[(ε>ε)]"), MalformedInput);
}

TEST(Codec, BackendTag) {
    auto id = parse_backend_tag("shift3:");
    EXPECT_EQ(id.kind, BackendKind::FullShift);
    EXPECT_EQ(id.base, 3);
    EXPECT_EQ(id.tag(), "shift3");
}

TEST(CodecProperty, RoundTrips) {
    Rng r = rng_for("codec");
    for (int t = 0; t < 300; ++t) {
        const int b = 2 + t % 3;
        auto x = random_clopen(r, b, 5);
        ASSERT_EQ(parse_clopen(encode(x)), x);
        auto f = random_element<Odometer>(r, b, 4);
        ASSERT_EQ(odo(encode(f)), f);
        ASSERT_EQ(parse_element<Odometer>(encode(f.bisection())), f);
        auto g = random_element<FullShift>(r, b, 4);
        ASSERT_EQ(shift(encode(g)), g);
    }
}

TEST(Words, GroupWordText) {
    auto w = GroupWord::parse("a*b^-1*c");
    EXPECT_EQ(w.text(), "a*b^-1*c");
    EXPECT_EQ(w.inverse().text(), "c^-1*b*a^-1");
    EXPECT_EQ(GroupWord::parse("1"), GroupWord{});
    EXPECT_THROW(GroupWord::parse("a**b"), MalformedInput);
    EXPECT_EQ(DerivedWitness::parse("[a,b]*[c,d]").text(), "[a,b]*[c,d]");
    EXPECT_THROW(DerivedWitness::parse("[a,b"), MalformedInput);
}

TEST(Json, CertificateFileRoundTrip) {
    Rng r = rng_for("json-cert");
    Environment<Odometer> env(2);
    env.bind("tau0", odometer_power(2, 1));
    env.bind("alpha", random_element<Odometer>(r, 2, 4));
    env.bind("beta", random_element<Odometer>(r, 2, 4));
    auto c = simplicity_certificate<Odometer>("tau0", {{"alpha", "beta"}}, env);
    const auto target = commutator(env.get("alpha"), env.get("beta"));
    const CertificateFile<Odometer> file{env, c.product, target, c.trace};
    const auto text = dump(to_json(file));
    auto back = certificate_from_json<Odometer>(parse_json(text));
    EXPECT_EQ(back.product, c.product);
    EXPECT_EQ(back.target, target);
    EXPECT_EQ(back.env.bindings().size(), env.bindings().size());
    EXPECT_TRUE(verify_certificate(back.product, back.env, back.target));
    EXPECT_EQ(dump(to_json(back)), text);
}

TEST(Json, RejectsBadFiles) {
    EXPECT_THROW(parse_json("{not json"), MalformedInput);
    EXPECT_THROW(certificate_from_json<Odometer>(parse_json("[]")), MalformedInput);
    EXPECT_THROW(certificate_from_json<Odometer>(parse_json(R"({"format_version": 2, "kind": "certificate"})")), MalformedInput);
    EXPECT_THROW(certificate_from_json<Odometer>(parse_json(R"({"format_version": 1, "kind": "selftest"})")), MalformedInput);
}
