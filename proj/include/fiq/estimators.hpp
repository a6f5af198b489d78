#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiq/models.hpp"
#include "fiq/rational.hpp"

namespace fiq {

/// How window statistics are gathered across bit positions.
enum class Pooling {
    PerPosition,  // non-stationary: each start position tallied on its own
    Pooled,       // stationary: all start positions share one tally
};

/// Pooling is only sound for stationary models, i.e. majority vote.
Pooling pooling_for(const FiqModel& model);

/// N realizations × d bit positions, entries in {0, 1}, row-major.
class SampleMatrix {
public:
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> data,
                 Pooling pooling = Pooling::PerPosition);

    static SampleMatrix from_prefixes(std::span<const BitPrefix> rows, Pooling pooling);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Pooling pooling() const { return pooling_; }
    std::uint8_t at(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> data_;
    Pooling pooling_;
};

/// Distribution over bit patterns of a fixed width; pattern bit i is the
/// value of the i-th tallied position. Either sampled counts (samples() > 0)
/// or an exact probability table (samples() == 0).
class BitDistribution {
public:
    static BitDistribution from_counts(std::vector<std::uint64_t> counts);
    static BitDistribution exact(std::span<const Rational> probabilities);
    static BitDistribution exact(std::vector<double> probabilities);

    std::size_t width() const { return width_; }
    std::size_t patterns() const { return weights_.size(); }
    std::uint64_t samples() const { return samples_; }
    bool is_exact() const { return samples_ == 0; }
    double probability(std::size_t pattern) const { return weights_[pattern] / total_; }

    /// Distribution of the pattern bits listed in `bits` (bit i of the
    /// result is bit bits[i] of this distribution).
    BitDistribution marginal(std::span<const std::size_t> bits) const;

private:
    BitDistribution(std::vector<double> weights, std::uint64_t samples);

    std::vector<double> weights_;
    double total_ = 0.0;
    std::uint64_t samples_ = 0;
    std::size_t width_ = 0;
};

struct EntropyEstimate {
    double plugin = 0.0;
    /// Miller–Madow term (observed_bins - 1) / (2N) · log2 e; zero for exact tables.
    double bias_correction = 0.0;
    std::size_t observed_bins = 0;
    std::size_t possible_bins = 0;
    std::uint64_t samples = 0;

    double value() const { return plugin + bias_correction; }
};

double plugin_entropy(const BitDistribution& dist);
EntropyEstimate entropy(const BitDistribution& dist);

/// Plug-in I(X;Y) in bits for a width-2 distribution.
double mutual_information(const BitDistribution& joint);

/// Upper 1e-4 quantile of chi-square with one degree of freedom.
inline constexpr double kMiNullQuantile = 15.136705226623397;

struct MutualInformation {
    double bits = 0.0;
    /// Mean plug-in MI of an independent pair: log2(e) / (2N).
    double noise_floor = 0.0;
    double threshold = 0.0;
    std::uint64_t samples = 0;

    bool significant() const { return bits > threshold; }
    double thresholded() const { return significant() ? bits : 0.0; }
};

MutualInformation pairwise_mi(const SampleMatrix& s, std::size_t i, std::size_t j);

struct PropensityEstimate {
    double frequency = 0.0;
    double half_width = 0.0;  // 3 sqrt(f(1-f)/N)
};

std::vector<PropensityEstimate> empirical_propensities(const SampleMatrix& s);

/// Joint distribution of the listed columns (0-based), one tally per row.
BitDistribution column_distribution(const SampleMatrix& s, std::span<const std::size_t> cols);

inline constexpr std::size_t kMaxBlockLength = 16;

/// H_L: entropy of length-L windows, pooled or averaged over start
/// positions according to s.pooling(). Miller–Madow corrected.
EntropyEstimate block_entropy(const SampleMatrix& s, std::size_t length);

struct EntropyRate {
    double rate = 0.0;                    // H_Lmax - H_{Lmax-1}
    std::vector<double> block_entropies;  // H_1 .. H_Lmax
    std::vector<double> per_symbol;       // H_L / L
};

EntropyRate entropy_rate(const SampleMatrix& s, std::size_t max_length);
EntropyRate entropy_rate(std::span<const double> block_entropies);

struct CandidateMeasures {
    std::vector<double> per_bit_terms;  // 1 - H(q_j)
    double per_bit_sum = 0.0;           // independent-bit measure applied as is
    double joint_entropy = 0.0;
    double multi_information = 0.0;     // d - H(joint)
};

CandidateMeasures correlated_info_content(const SampleMatrix& s, std::size_t d);
CandidateMeasures correlated_info_content(const BitDistribution& joint);

struct CorrelationReport {
    std::vector<double> marginals;
    std::vector<std::vector<double>> mi_matrix;
    std::vector<std::vector<bool>> significant;
    std::uint64_t n_samples = 0;
    double noise_floor = 0.0;
    double threshold = 0.0;
};

CorrelationReport correlation_report(const SampleMatrix& s);

struct InfoReport {
    std::string measure_name;
    std::vector<double> per_bit_terms;
    double total = 0.0;
    std::vector<EntropyEstimate> block_entropies;
    std::vector<double> per_symbol_entropies;
    double entropy_rate_estimate = 0.0;
    CandidateMeasures candidates;
    std::uint64_t generating_bits = 0;
};

InfoReport info_report(const SampleMatrix& s, std::size_t max_length,
                       std::uint64_t generating_bits);

void to_json(nlohmann::json& j, const EntropyEstimate& e);
void to_json(nlohmann::json& j, const CandidateMeasures& c);
void to_json(nlohmann::json& j, const CorrelationReport& r);
void to_json(nlohmann::json& j, const InfoReport& r);

}  // namespace fiq
