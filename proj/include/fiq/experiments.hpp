#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiq/estimators.hpp"
#include "fiq/models.hpp"
#include "fiq/rational.hpp"

namespace fiq {

enum class ExperimentKind { Units, Majority, UnitsOnMajority };

/// What a units experiment sets out to show: correlated output digits (the
/// change-of-units critique) or their absence (control runs).
enum class Expectation { Correlated, Independent };

struct Thresholds {
    double sigma = 3.0;
    double mi_null_quantile = kMiNullQuantile;
};

struct ExperimentSpec {
    std::string name;
    ExperimentKind kind = ExperimentKind::Units;
    FiqModel model = IndependentBitsModel{};
    Rational constant = 1;
    std::size_t depth = 12;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    Expectation expect = Expectation::Correlated;
    Thresholds thresholds;
    /// Output digits 1..digit_pairs enter the pairwise statistics.
    std::size_t digit_pairs = 4;
};

/// One checked statement. Carries an exact oracle value, a statistical
/// bound around an estimate, or both.
struct Claim {
    std::string statement;
    nlohmann::json exact;  // null when no exact oracle applies
    std::optional<double> estimate;
    std::optional<double> bound;
    bool pass = false;
};

struct ExperimentVerdict {
    std::string name;
    std::vector<Claim> claims;
    nlohmann::json report;
    /// CSV side tables keyed by file name; written next to the verdict.
    std::map<std::string, std::string> tables;
    std::vector<std::string> artifacts;

    bool passed() const;
};

ExperimentVerdict run_units_critique(const ExperimentSpec& spec, unsigned threads = 1);
ExperimentVerdict run_majority_study(const ExperimentSpec& spec, unsigned threads = 1);
ExperimentVerdict run_units_on_majority(const ExperimentSpec& spec, unsigned threads = 1);
ExperimentVerdict run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

std::vector<std::string> preset_names(ExperimentKind kind);
/// Throws std::invalid_argument for unknown names. The preset's seed is 0;
/// callers supply their own.
ExperimentSpec preset(ExperimentKind kind, const std::string& name);

ExperimentKind parse_kind(const std::string& text);
std::string kind_name(ExperimentKind kind);

void to_json(nlohmann::json& j, const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const Claim& c);
void to_json(nlohmann::json& j, const ExperimentVerdict& v);

}  // namespace fiq
