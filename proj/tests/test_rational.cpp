#include <gtest/gtest.h>

#include "fiq/rational.hpp"

using fiq::BigInt;
using fiq::Rational;

TEST(Rational, ParsesFractionsAndIntegers) {
    EXPECT_EQ(fiq::parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(fiq::parse_rational("6/8"), Rational(3, 4));
    EXPECT_EQ(fiq::parse_rational("7"), Rational(7));
    EXPECT_EQ(fiq::parse_rational("-1/2"), Rational(-1, 2));
    EXPECT_EQ(fiq::parse_rational("+5/10"), Rational(1, 2));
    EXPECT_EQ(fiq::parse_rational("1143/1250"), Rational(1143, 1250));
}

TEST(Rational, RejectsMalformedText) {
    for (const char* bad : {"", "/", "1/", "/2", "a/2", "1/b", "1.5", "1/0", "1//2", " 1/2", "-"}) {
        EXPECT_THROW(fiq::parse_rational(bad), std::invalid_argument) << bad;
    }
}

TEST(Rational, CanonicalText) {
    EXPECT_EQ(fiq::to_string(Rational(6, 8)), "3/4");
    EXPECT_EQ(fiq::to_string(Rational(4, 2)), "2");
    EXPECT_EQ(fiq::to_string(Rational(-1, 3)), "-1/3");
    EXPECT_EQ(fiq::to_string(fiq::parse_rational(fiq::to_string(Rational(1143, 1250)))), "1143/1250");
}

TEST(Rational, FloorAndCeil) {
    EXPECT_EQ(fiq::floor(Rational(7, 2)), BigInt(3));
    EXPECT_EQ(fiq::ceil(Rational(7, 2)), BigInt(4));
    EXPECT_EQ(fiq::floor(Rational(-7, 2)), BigInt(-4));
    EXPECT_EQ(fiq::ceil(Rational(-7, 2)), BigInt(-3));
    EXPECT_EQ(fiq::floor(Rational(3)), BigInt(3));
    EXPECT_EQ(fiq::ceil(Rational(3)), BigInt(3));
}

TEST(Rational, PowersOfTwo) {
    EXPECT_EQ(fiq::pow2(0), Rational(1));
    EXPECT_EQ(fiq::pow2(10), Rational(1024));
    EXPECT_EQ(fiq::pow2(-3), Rational(1, 8));
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(1)), 0);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(8)), 3);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(1, 2)), -1);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(3)), std::nullopt);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(3, 8)), std::nullopt);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(0)), std::nullopt);
    EXPECT_EQ(fiq::power_of_two_exponent(Rational(-2)), std::nullopt);
    for (int e = -70; e <= 70; e += 7) {
        EXPECT_EQ(fiq::power_of_two_exponent(fiq::pow2(e)), e);
    }
}

TEST(Rational, ToDouble) {
    EXPECT_DOUBLE_EQ(fiq::to_double(Rational(1, 3)), 1.0 / 3.0);
    EXPECT_EQ(fiq::to_double(Rational(3, 4)), 0.75);
}
