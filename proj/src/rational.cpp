#include "fiq/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace fiq {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        i = 1;
    }
    if (i == text.size()) {
        throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
    for (std::size_t j = i; j < text.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
            throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
        }
    }
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return BigInt(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, text));
    }
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) {
        throw std::invalid_argument("zero denominator in rational '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt floor(const Rational& r) {
    BigInt q, rem;
    divide_qr(numerator(r), denominator(r), q, rem);
    // divide_qr truncates toward zero
    if (rem != 0 && r < 0) {
        q -= 1;
    }
    return q;
}

BigInt ceil(const Rational& r) {
    BigInt f = floor(r);
    return Rational(f) == r ? f : f + 1;
}

std::optional<int> power_of_two_exponent(const Rational& r) {
    if (r <= 0) {
        return std::nullopt;
    }
    const BigInt& num = numerator(r);
    const BigInt& den = denominator(r);
    auto is_pow2 = [](const BigInt& n) { return n > 0 && (n & (n - 1)) == 0; };
    if (den == 1 && is_pow2(num)) {
        return static_cast<int>(msb(num));
    }
    if (num == 1 && is_pow2(den)) {
        return -static_cast<int>(msb(den));
    }
    return std::nullopt;
}

Rational pow2(int e) {
    BigInt p = 1;
    if (e >= 0) {
        p <<= e;
        return Rational(p);
    }
    p <<= -e;
    return Rational(BigInt(1), p);
}

}  // namespace fiq
