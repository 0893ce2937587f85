#include <gtest/gtest.h>

#include "fullgroup/selftest.hpp"

using namespace fullgroup;

TEST(Rng, LabeledSubstreamsAreStable) {
    Rng a(5), b(5);
    auto sa = a.substream("group-axioms/odo2"), sb = b.substream("group-axioms/odo2");
    for (int i = 0; i < 10; ++i) EXPECT_EQ(sa.next(), sb.next());
    auto other = a.substream("group-axioms/odo3");
    EXPECT_NE(a.substream("group-axioms/odo2").next(), other.next());
    Rng c(1);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(c.below(7), 7u);
}

TEST(RunConfig, ZeroTrialsRejected) {
    RunConfig cfg;
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), PreconditionViolation);
    EXPECT_THROW(selftest("group-axioms", cfg), PreconditionViolation);
}

TEST(Selftest, UnknownSuite) { EXPECT_THROW(selftest("no-such-suite", RunConfig{}), MalformedInput); }

TEST(Selftest, MeasureInvarianceAllPass) {
    RunConfig cfg{{BackendKind::Odometer, 2}, 3, 5, 200};
    auto rep = selftest("measure-invariance", cfg);
    ASSERT_EQ(rep.properties.size(), 1u);
    EXPECT_EQ(rep.properties[0].trials, 200u);
    EXPECT_EQ(rep.properties[0].passed, 200u);
    EXPECT_FALSE(rep.properties[0].vacuous);
}

TEST(Selftest, MeasureInvarianceVacuousOnShift) {
    RunConfig cfg{{BackendKind::FullShift, 2}, 3, 4, 10};
    auto rep = selftest("measure-invariance", cfg);
    EXPECT_TRUE(rep.ok());
    EXPECT_TRUE(rep.properties[0].vacuous);
}

TEST(Selftest, LemmaTransfersBothBackends) {
    for (auto kind : {BackendKind::Odometer, BackendKind::FullShift}) {
        auto rep = selftest("lemma-transfers", RunConfig{{kind, 2}, 11, 5, 100});
        EXPECT_TRUE(rep.ok()) << dump(rep.to_json());
        EXPECT_EQ(rep.properties.size(), 3u);
    }
}

TEST(Selftest, EverySuitePassesOnEveryBackend) {
    for (auto kind : {BackendKind::Odometer, BackendKind::FullShift})
        for (int base : {2, 3}) {
            auto rep = selftest("all", RunConfig{{kind, base}, 17, 4, 15});
            EXPECT_TRUE(rep.ok()) << dump(rep.to_json());
        }
}

TEST(Selftest, SameSeedSameBytes) {
    RunConfig cfg{{BackendKind::FullShift, 3}, 42, 4, 25};
    EXPECT_EQ(dump(selftest("group-axioms", cfg).to_json()), dump(selftest("group-axioms", cfg).to_json()));
}
