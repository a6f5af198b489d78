#include "fiq/propensity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fiq {

Propensity::Propensity(Rational value) : value_(std::move(value)) {
    if (value_ < 0 || value_ > 1) {
        throw std::invalid_argument("propensity " + to_string(value_) + " outside [0, 1]");
    }
}

Propensity Propensity::parse(std::string_view text) { return Propensity(parse_rational(text)); }

Propensity PropensityVector::at(std::size_t position) const {
    if (position == 0) {
        throw std::out_of_range("bit positions start at 1");
    }
    if (position <= prefix.size()) {
        return prefix[position - 1];
    }
    if (tail == TailPolicy::HalfTail) {
        return Propensity::half();
    }
    throw std::out_of_range("bit " + std::to_string(position) +
                            " lies beyond an unspecified tail (prefix length " +
                            std::to_string(prefix.size()) + ")");
}

double binary_entropy(const Propensity& q) {
    if (q.is_deterministic()) {
        return 0.0;
    }
    if (q.is_half()) {
        return 1.0;
    }
    // Work from the smaller of q and 1 - q, taken exactly, and use log1p for
    // the larger so neither term loses the small one's digits.
    const Rational small = q.value() < Rational(1, 2) ? q.value() : 1 - q.value();
    const double s = to_double(small);
    const double rest = to_double(1 - small);
    return (-s * std::log(s) - rest * std::log1p(-s)) / std::numbers::ln2;
}

InformationMeasure information_content_independent(const PropensityVector& pv) {
    InformationMeasure m;
    for (const auto& q : pv.prefix) {
        m.bits += 1.0 - binary_entropy(q);
    }
    m.lower_bound = pv.tail == TailPolicy::Unspecified;
    return m;
}

bool satisfies_sufficient_condition(const PropensityVector& pv) {
    return pv.tail == TailPolicy::HalfTail;
}

void to_json(nlohmann::json& j, const Propensity& p) { j = to_string(p.value()); }

void from_json(const nlohmann::json& j, Propensity& p) {
    if (!j.is_string()) {
        throw std::invalid_argument("propensity must be a \"p/q\" string");
    }
    p = Propensity::parse(j.get<std::string>());
}

void to_json(nlohmann::json& j, const PropensityVector& pv) {
    j = nlohmann::json{{"prefix", pv.prefix},
                       {"tail", pv.tail == TailPolicy::HalfTail ? "half" : "unspecified"}};
}

void from_json(const nlohmann::json& j, PropensityVector& pv) {
    if (!j.is_object()) {
        throw std::invalid_argument("propensity vector must be a JSON object");
    }
    pv.prefix = j.value("prefix", nlohmann::json::array()).get<std::vector<Propensity>>();
    const auto tail = j.value("tail", std::string("half"));
    if (tail == "half") {
        pv.tail = TailPolicy::HalfTail;
    } else if (tail == "unspecified") {
        pv.tail = TailPolicy::Unspecified;
    } else {
        throw std::invalid_argument("unknown tail policy '" + tail + "'");
    }
}

}  // namespace fiq
