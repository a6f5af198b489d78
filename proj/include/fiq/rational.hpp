#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace fiq {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "p/q" or "p" (decimal integers, optional leading '-') into a
/// rational in lowest terms. Throws std::invalid_argument on malformed
/// text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text; integers are written without the "/1".
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

double to_double(const Rational& r);

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

/// Exponent e with r == 2^e, if r is a positive power of two.
std::optional<int> power_of_two_exponent(const Rational& r);

/// 2^e as an exact rational (e may be negative).
Rational pow2(int e);

}  // namespace fiq
