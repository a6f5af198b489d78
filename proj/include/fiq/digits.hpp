#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiq/models.hpp"
#include "fiq/rational.hpp"

namespace fiq {

/// Every completion of a partially known quantity: the half-open interval
/// [low, high) with exact rational endpoints, tagged with a unit label.
class PartialNumber {
public:
    PartialNumber(Rational low, Rational high, std::string unit = {});

    const Rational& low() const { return low_; }
    const Rational& high() const { return high_; }
    const std::string& unit() const { return unit_; }
    Rational width() const { return high_ - low_; }

    bool contains(const Rational& z) const { return low_ <= z && z < high_; }

    friend bool operator==(const PartialNumber&, const PartialNumber&) = default;

private:
    Rational low_;
    Rational high_;
    std::string unit_;
};

/// Output digits shared by every point of an interval. The integer part is
/// empty when the interval straddles an integer; fraction_bits stops at the
/// first position that varies.
struct DeterminedDigits {
    std::optional<BigInt> integer_part;
    std::vector<std::uint8_t> fraction_bits;

    std::size_t count() const { return fraction_bits.size(); }

    /// "2.0110", or "?." when the integer part is undetermined.
    std::string to_string() const;

    friend bool operator==(const DeterminedDigits&, const DeterminedDigits&) = default;
    friend bool operator<(const DeterminedDigits& a, const DeterminedDigits& b);
};

PartialNumber prefix_to_interval(const BitPrefix& prefix, std::string unit = {});

/// [c low, c high). c must be positive.
PartialNumber scale_by_constant(const PartialNumber& x, const Rational& c);

/// [x.low + y.low, x.high + y.high). Unit labels must match.
PartialNumber add(const PartialNumber& x, const PartialNumber& y);

DeterminedDigits determined_digits(const PartialNumber& x);

/// Integer part and the first `count` fractional binary digits of the
/// single point z >= 0, i.e. floor(z) and floor(2^j z) mod 2.
DeterminedDigits digits_of_point(const Rational& z, std::size_t count);

/// Largest integer t with 2^t <= r, for r > 0.
int floor_log2(const Rational& r);

inline constexpr std::size_t kMaxExactScalingDepth = 20;

using DigitsDistribution = std::map<DeterminedDigits, Rational>;

/// Exact distribution of the determined digits of c·Q over all 2^depth
/// prefixes of an independent-bit model, each weighted by its propensity
/// product. The residual tail is carried by the dyadic interval.
DigitsDistribution scale_fiq_truncated(const FiqModel& model, const Rational& c,
                                       std::size_t depth, unsigned threads = 1);

/// Monte Carlo counterpart: `samples` prefixes drawn on consecutive streams,
/// tallied by determined digits.
std::map<DeterminedDigits, std::uint64_t> scale_fiq_sampled(const FiqModel& model,
                                                             const Rational& c, std::size_t depth,
                                                             std::size_t samples,
                                                             unsigned threads = 1);

void to_json(nlohmann::json& j, const DeterminedDigits& d);

}  // namespace fiq
