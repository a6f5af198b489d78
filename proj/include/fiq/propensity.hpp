#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "fiq/rational.hpp"

namespace fiq {

/// Disposition of a single bit to take the value 1. An exact rational in
/// [0, 1]; construction outside that range throws std::invalid_argument.
class Propensity {
public:
    Propensity() = default;
    explicit Propensity(Rational value);

    static Propensity parse(std::string_view text);
    static Propensity half() { return Propensity(Rational(1, 2)); }

    const Rational& value() const { return value_; }
    Propensity complement() const { return Propensity(1 - value_); }
    bool is_half() const { return value_ == Rational(1, 2); }
    bool is_deterministic() const { return value_ == 0 || value_ == 1; }

    friend bool operator==(const Propensity&, const Propensity&) = default;

private:
    Rational value_{1, 2};
};

enum class TailPolicy {
    HalfTail,     // every bit past the prefix has propensity 1/2
    Unspecified,  // nothing is claimed past the prefix
};

/// [q_1 .. q_M] followed by the tail policy.
struct PropensityVector {
    std::vector<Propensity> prefix;
    TailPolicy tail = TailPolicy::HalfTail;

    /// Propensity of bit `position` (1-based). For HalfTail, positions past
    /// the prefix are 1/2; for Unspecified they throw std::out_of_range.
    Propensity at(std::size_t position) const;

    friend bool operator==(const PropensityVector&, const PropensityVector&) = default;
};

/// H(q) = -q log2 q - (1-q) log2 (1-q), with 0 log 0 = 0.
double binary_entropy(const Propensity& q);

struct InformationMeasure {
    double bits = 0.0;
    // Set for Unspecified tails: `bits` is only the explicit-prefix partial sum.
    bool lower_bound = false;
};

/// Sum over bits of 1 - H(q_k). A HalfTail contributes exactly zero.
InformationMeasure information_content_independent(const PropensityVector& pv);

bool satisfies_sufficient_condition(const PropensityVector& pv);

void to_json(nlohmann::json& j, const Propensity& p);
void from_json(const nlohmann::json& j, Propensity& p);
void to_json(nlohmann::json& j, const PropensityVector& pv);
void from_json(const nlohmann::json& j, PropensityVector& pv);

}  // namespace fiq
