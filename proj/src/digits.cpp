#include "fiq/digits.hpp"

#include <algorithm>
#include <stdexcept>

namespace fiq {

namespace {

// Digits of [a/den, b/den) for integers a < b, den > 0.
DeterminedDigits digits_of_scaled(BigInt a, BigInt b, const BigInt& den) {
    DeterminedDigits out;
    BigInt n, rem;
    divide_qr(a, den, n, rem);
    if (rem < 0) {
        n -= 1;
    }
    // The floor is constant on [a, b) iff b <= (n + 1) den.
    if (b > (n + 1) * den) {
        return out;
    }
    a -= n * den;
    b -= n * den;
    out.integer_part = std::move(n);
    // Invariant: 0 <= a < b <= den. Width doubles every step, so this ends.
    for (;;) {
        a <<= 1;
        b <<= 1;
        if (a >= den) {
            out.fraction_bits.push_back(1);
            a -= den;
            b -= den;
        } else if (b <= den) {
            out.fraction_bits.push_back(0);
        } else {
            return out;
        }
    }
}

BigInt prefix_numerator(const BitPrefix& prefix) {
    BigInt v = 0;
    for (auto bit : prefix.bits) {
        v <<= 1;
        if (bit) v += 1;
    }
    return v;
}

const IndependentBitsModel& require_independent(const FiqModel& model) {
    const auto* m = std::get_if<IndependentBitsModel>(&model);
    if (!m) {
        throw std::invalid_argument("exact scaling enumerates independent-bit models only");
    }
    return *m;
}

void require_positive(const Rational& c) {
    if (c <= 0) {
        throw std::invalid_argument("scaling constant must be positive, got " + to_string(c));
    }
}

}  // namespace

PartialNumber::PartialNumber(Rational low, Rational high, std::string unit)
    : low_(std::move(low)), high_(std::move(high)), unit_(std::move(unit)) {
    if (!(low_ < high_)) {
        throw std::invalid_argument("empty interval [" + fiq::to_string(low_) + ", " +
                                    fiq::to_string(high_) + ")");
    }
}

std::string DeterminedDigits::to_string() const {
    std::string s = integer_part ? fiq::to_string(*integer_part) : "?";
    s += '.';
    for (auto b : fraction_bits) s += b ? '1' : '0';
    return s;
}

bool operator<(const DeterminedDigits& a, const DeterminedDigits& b) {
    // Undetermined integer parts sort first.
    if (a.integer_part.has_value() != b.integer_part.has_value()) {
        return !a.integer_part.has_value();
    }
    if (a.integer_part && *a.integer_part != *b.integer_part) {
        return *a.integer_part < *b.integer_part;
    }
    return a.fraction_bits < b.fraction_bits;
}

PartialNumber prefix_to_interval(const BitPrefix& prefix, std::string unit) {
    const Rational cell = pow2(-static_cast<int>(prefix.depth()));
    const Rational low = Rational(prefix_numerator(prefix)) * cell;
    return PartialNumber(low, low + cell, std::move(unit));
}

PartialNumber scale_by_constant(const PartialNumber& x, const Rational& c) {
    require_positive(c);
    return PartialNumber(x.low() * c, x.high() * c, x.unit());
}

PartialNumber add(const PartialNumber& x, const PartialNumber& y) {
    if (x.unit() != y.unit()) {
        throw std::invalid_argument("cannot add quantities in '" + x.unit() + "' and '" +
                                    y.unit() + "'");
    }
    return PartialNumber(x.low() + y.low(), x.high() + y.high(), x.unit());
}

DeterminedDigits determined_digits(const PartialNumber& x) {
    const BigInt den = lcm(denominator(x.low()), denominator(x.high()));
    return digits_of_scaled(numerator(x.low()) * (den / denominator(x.low())),
                            numerator(x.high()) * (den / denominator(x.high())), den);
}

DeterminedDigits digits_of_point(const Rational& z, std::size_t count) {
    if (z < 0) {
        throw std::invalid_argument("digits_of_point expects a nonnegative value");
    }
    DeterminedDigits out;
    out.integer_part = floor(z);
    for (std::size_t j = 1; j <= count; ++j) {
        const BigInt scaled = floor(z * pow2(static_cast<int>(j)));
        out.fraction_bits.push_back(bit_test(scaled, 0) ? 1 : 0);
    }
    return out;
}

int floor_log2(const Rational& r) {
    if (r <= 0) {
        throw std::invalid_argument("floor_log2 needs a positive value");
    }
    int t = static_cast<int>(msb(numerator(r))) - static_cast<int>(msb(denominator(r)));
    while (pow2(t) > r) --t;
    while (pow2(t + 1) <= r) ++t;
    return t;
}

DigitsDistribution scale_fiq_truncated(const FiqModel& model, const Rational& c,
                                       std::size_t depth, unsigned threads) {
    const auto& m = require_independent(model);
    require_positive(c);
    if (depth > kMaxExactScalingDepth) {
        throw EnumerationBoundExceeded("exact scaling depth " + std::to_string(depth) +
                                       " exceeds " + std::to_string(kMaxExactScalingDepth));
    }
    if (m.pv.tail == TailPolicy::Unspecified && depth > m.pv.prefix.size()) {
        throw DepthBeyondKnowledge("exact scaling to depth " + std::to_string(depth) +
                                   " needs propensities past the specified prefix");
    }

    std::vector<Rational> one(depth), zero(depth);
    for (std::size_t j = 0; j < depth; ++j) {
        one[j] = m.pv.at(j + 1).value();
        zero[j] = 1 - one[j];
    }
    // c·[V/2^d, (V+1)/2^d) = [pV, p(V+1)) / (q 2^d)
    const BigInt& p = numerator(c);
    const BigInt den = denominator(c) << static_cast<unsigned>(depth);

    // Subtrees rooted at a fixed split level, each tallied independently and
    // merged in index order; exact sums make the merge order irrelevant anyway.
    const std::size_t split = std::min<std::size_t>(depth, 8);
    const std::size_t subtrees = std::size_t{1} << split;
    std::vector<DigitsDistribution> partial(subtrees);

    parallel_rows(subtrees, threads, [&](std::size_t root) {
        Rational weight = 1;
        for (std::size_t j = 0; j < split; ++j) {
            const bool bit = (root >> (split - 1 - j)) & 1;
            weight *= bit ? one[j] : zero[j];
        }
        if (weight == 0) {
            return;
        }
        auto& out = partial[root];
        auto visit = [&](auto&& self, std::size_t level, const BigInt& v, const Rational& w) -> void {
            if (w == 0) {
                return;
            }
            if (level == depth) {
                out[digits_of_scaled(p * v, p * (v + 1), den)] += w;
                return;
            }
            self(self, level + 1, v << 1, w * zero[level]);
            self(self, level + 1, (v << 1) + 1, w * one[level]);
        };
        visit(visit, split, BigInt(root), weight);
    });

    DigitsDistribution result;
    for (auto& part : partial) {
        for (auto& [digits, w] : part) {
            result[digits] += w;
        }
    }
    return result;
}

std::map<DeterminedDigits, std::uint64_t> scale_fiq_sampled(const FiqModel& model,
                                                             const Rational& c, std::size_t depth,
                                                             std::size_t samples,
                                                             unsigned threads) {
    require_positive(c);
    const PrefixSampler sampler(model, depth);
    const std::uint64_t base = source_of(model).stream_id();
    const BigInt& p = numerator(c);
    const BigInt den = denominator(c) << static_cast<unsigned>(depth);
    std::vector<DeterminedDigits> rows(samples);
    parallel_rows(samples, threads, [&](std::size_t r) {
        const BigInt v = prefix_numerator(sampler.sample(base + r));
        rows[r] = digits_of_scaled(p * v, p * (v + 1), den);
    });
    std::map<DeterminedDigits, std::uint64_t> tally;
    for (auto& d : rows) {
        ++tally[std::move(d)];
    }
    return tally;
}

void to_json(nlohmann::json& j, const DeterminedDigits& d) {
    std::string frac;
    for (auto b : d.fraction_bits) frac += b ? '1' : '0';
    nlohmann::json integer = nullptr;
    if (d.integer_part) {
        if (*d.integer_part <= BigInt(INT64_MAX)) {
            integer = d.integer_part->convert_to<std::int64_t>();
        } else {
            integer = to_string(*d.integer_part);
        }
    }
    j = nlohmann::json{{"int", integer}, {"frac", frac}};
}

}  // namespace fiq
