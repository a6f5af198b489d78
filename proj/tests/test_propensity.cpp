#include <random>

#include <gtest/gtest.h>

#include "fiq/propensity.hpp"
#include "oracles.hpp"

using fiq::Propensity;
using fiq::PropensityVector;
using fiq::Rational;
using fiq::TailPolicy;

namespace {

Propensity p(long num, long den) { return Propensity(Rational(num, den)); }

}  // namespace

TEST(Propensity, RangeIsChecked) {
    EXPECT_NO_THROW(p(0, 1));
    EXPECT_NO_THROW(p(1, 1));
    EXPECT_THROW(p(-1, 4), std::invalid_argument);
    EXPECT_THROW(p(5, 4), std::invalid_argument);
    EXPECT_THROW(Propensity::parse("3/2"), std::invalid_argument);
    EXPECT_EQ(Propensity::parse("2/4"), Propensity::half());
    EXPECT_TRUE(Propensity().is_half());
    EXPECT_TRUE(p(0, 1).is_deterministic());
    EXPECT_EQ(p(1, 4).complement(), p(3, 4));
}

TEST(BinaryEntropy, ExactSpecialValues) {
    EXPECT_EQ(fiq::binary_entropy(Propensity::half()), 1.0);
    EXPECT_EQ(fiq::binary_entropy(p(0, 1)), 0.0);
    EXPECT_EQ(fiq::binary_entropy(p(1, 1)), 0.0);
}

TEST(BinaryEntropy, QuarterMatchesFrozenValue) {
    EXPECT_NEAR(fiq::binary_entropy(p(1, 4)), 0.8112781244591328639, 1e-15);
    EXPECT_NEAR(1.0 - fiq::binary_entropy(p(3, 4)), 0.1887218755408671361, 1e-15);
}

TEST(BinaryEntropy, SymmetricAndBoundedProperty) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const long den = std::uniform_int_distribution<long>(1, 1'000'000)(rng);
        const long num = std::uniform_int_distribution<long>(0, den)(rng);
        const Propensity q = p(num, den);
        const double h = fiq::binary_entropy(q);
        EXPECT_EQ(h, fiq::binary_entropy(q.complement()));
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, 1.0);
        EXPECT_NEAR(h, oracle::binary_entropy(q.value()), 1e-12);
    }
}

TEST(BinaryEntropy, ExtremeRationalsStayAccurate) {
    for (int e : {20, 40, 80}) {
        const Rational tiny = fiq::pow2(-e);
        const double expect = oracle::binary_entropy(tiny);
        EXPECT_NEAR(fiq::binary_entropy(Propensity(tiny)), expect, 1e-12 * expect + 1e-300);
        EXPECT_NEAR(fiq::binary_entropy(Propensity(1 - tiny)), expect, 1e-12 * expect + 1e-300);
    }
}

TEST(PropensityVector, TailPolicies) {
    PropensityVector pv{{p(3, 4), p(1, 3)}, TailPolicy::HalfTail};
    EXPECT_EQ(pv.at(1), p(3, 4));
    EXPECT_EQ(pv.at(2), p(1, 3));
    EXPECT_EQ(pv.at(3), Propensity::half());
    EXPECT_EQ(pv.at(1000), Propensity::half());
    EXPECT_THROW(pv.at(0), std::out_of_range);
    pv.tail = TailPolicy::Unspecified;
    EXPECT_EQ(pv.at(2), p(1, 3));
    EXPECT_THROW(pv.at(3), std::out_of_range);
}

TEST(InformationContent, WorkedExample) {
    const PropensityVector pv{{p(3, 4), p(3, 4)}, TailPolicy::HalfTail};
    const auto m = fiq::information_content_independent(pv);
    EXPECT_NEAR(m.bits, 2 * 0.1887218755408671361, 1e-14);
    EXPECT_FALSE(m.lower_bound);
    EXPECT_TRUE(fiq::satisfies_sufficient_condition(pv));
}

TEST(InformationContent, UnspecifiedTailIsALowerBound) {
    const PropensityVector pv{{p(1, 1), p(0, 1)}, TailPolicy::Unspecified};
    const auto m = fiq::information_content_independent(pv);
    EXPECT_EQ(m.bits, 2.0);
    EXPECT_TRUE(m.lower_bound);
    EXPECT_FALSE(fiq::satisfies_sufficient_condition(pv));
}

TEST(InformationContent, ZeroIffAllHalfProperty) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        PropensityVector pv;
        const int len = std::uniform_int_distribution<int>(0, 32)(rng);
        bool all_half = true;
        double expect = 0;
        for (int i = 0; i < len; ++i) {
            Propensity q = Propensity::half();
            if (rng() % 3 == 0) {
                const long den = std::uniform_int_distribution<long>(1, 1000)(rng);
                q = p(std::uniform_int_distribution<long>(0, den)(rng), den);
            }
            all_half = all_half && q.is_half();
            expect += 1.0 - oracle::binary_entropy(q.value());
            pv.prefix.push_back(q);
        }
        const auto m = fiq::information_content_independent(pv);
        EXPECT_NEAR(m.bits, expect, 1e-12);
        EXPECT_EQ(m.bits == 0.0, all_half);
        EXPECT_GE(m.bits, 0.0);
    }
}

TEST(PropensityVector, JsonRoundTrip) {
    const PropensityVector pv{{p(3, 4), p(1143, 1250)}, TailPolicy::Unspecified};
    const nlohmann::json j = pv;
    EXPECT_EQ(j.dump(), R"({"prefix":["3/4","1143/1250"],"tail":"unspecified"})");
    EXPECT_EQ(j.get<PropensityVector>(), pv);
    EXPECT_EQ(nlohmann::json::parse(R"({"prefix":[]})").get<PropensityVector>().tail,
              TailPolicy::HalfTail);
    EXPECT_THROW(nlohmann::json::parse(R"({"tail":"never"})").get<PropensityVector>(),
                 std::invalid_argument);
    EXPECT_THROW(nlohmann::json::parse(R"({"prefix":[0.5]})").get<PropensityVector>(),
                 std::invalid_argument);
    EXPECT_THROW(nlohmann::json::parse(R"({"prefix":["2"]})").get<PropensityVector>(),
                 std::invalid_argument);
}
