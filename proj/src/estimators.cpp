#include "fiq/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fiq {

namespace {

constexpr double kLog2e = std::numbers::log2e;

double h2(double f) {
    if (f <= 0.0 || f >= 1.0) {
        return 0.0;
    }
    return -f * std::log2(f) - (1.0 - f) * std::log2(1.0 - f);
}

std::size_t width_of(std::size_t patterns) {
    if (patterns == 0 || !std::has_single_bit(patterns)) {
        throw std::invalid_argument("pattern table size must be a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(patterns));
}

void require_rows(const SampleMatrix& s) {
    if (s.rows() == 0 || s.cols() == 0) {
        throw std::invalid_argument("empty sample matrix");
    }
}

void check_block_length(const SampleMatrix& s, std::size_t length) {
    if (length == 0 || length > s.cols() || length > kMaxBlockLength) {
        throw std::invalid_argument("block length " + std::to_string(length) +
                                    " must lie in [1, min(depth " + std::to_string(s.cols()) +
                                    ", " + std::to_string(kMaxBlockLength) + ")]");
    }
}

std::vector<std::uint64_t> window_counts(const SampleMatrix& s, std::size_t length,
                                         std::size_t first_start, std::size_t last_start) {
    std::vector<std::uint64_t> counts(std::size_t{1} << length, 0);
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t start = first_start; start <= last_start; ++start) {
            std::size_t pattern = 0;
            for (std::size_t i = 0; i < length; ++i) {
                pattern |= std::size_t{s.at(r, start + i)} << i;
            }
            ++counts[pattern];
        }
    }
    return counts;
}

}  // namespace

Pooling pooling_for(const FiqModel& model) {
    return std::holds_alternative<MajorityVoteModel>(model) ? Pooling::Pooled
                                                            : Pooling::PerPosition;
}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> data,
                           Pooling pooling)
    : rows_(rows), cols_(cols), data_(std::move(data)), pooling_(pooling) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("sample data size does not match rows × cols");
    }
    if (std::any_of(data_.begin(), data_.end(), [](auto b) { return b > 1; })) {
        throw std::invalid_argument("sample entries must be 0 or 1");
    }
}

SampleMatrix SampleMatrix::from_prefixes(std::span<const BitPrefix> rows, Pooling pooling) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().depth();
    std::vector<std::uint8_t> data;
    data.reserve(rows.size() * cols);
    for (const auto& row : rows) {
        if (row.depth() != cols) {
            throw std::invalid_argument("ragged sample rows");
        }
        data.insert(data.end(), row.bits.begin(), row.bits.end());
    }
    return SampleMatrix(rows.size(), cols, std::move(data), pooling);
}

BitDistribution::BitDistribution(std::vector<double> weights, std::uint64_t samples)
    : weights_(std::move(weights)), samples_(samples), width_(width_of(weights_.size())) {
    for (double w : weights_) {
        if (w < 0.0) {
            throw std::invalid_argument("negative weight in bit distribution");
        }
        total_ += w;
    }
    if (total_ <= 0.0) {
        throw std::invalid_argument("bit distribution has no mass");
    }
}

BitDistribution BitDistribution::from_counts(std::vector<std::uint64_t> counts) {
    std::uint64_t n = 0;
    std::vector<double> weights(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        n += counts[i];
        weights[i] = static_cast<double>(counts[i]);
    }
    if (n == 0) {
        throw std::invalid_argument("bit distribution has no samples");
    }
    return BitDistribution(std::move(weights), n);
}

BitDistribution BitDistribution::exact(std::span<const Rational> probabilities) {
    std::vector<double> weights;
    weights.reserve(probabilities.size());
    for (const auto& p : probabilities) weights.push_back(to_double(p));
    return BitDistribution(std::move(weights), 0);
}

BitDistribution BitDistribution::exact(std::vector<double> probabilities) {
    return BitDistribution(std::move(probabilities), 0);
}

BitDistribution BitDistribution::marginal(std::span<const std::size_t> bits) const {
    for (auto b : bits) {
        if (b >= width_) {
            throw std::out_of_range("marginal bit index out of range");
        }
    }
    std::vector<double> out(std::size_t{1} << bits.size(), 0.0);
    for (std::size_t pattern = 0; pattern < weights_.size(); ++pattern) {
        std::size_t m = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            m |= ((pattern >> bits[i]) & 1u) << i;
        }
        out[m] += weights_[pattern];
    }
    return BitDistribution(std::move(out), samples_);
}

double plugin_entropy(const BitDistribution& dist) {
    double h = 0.0;
    for (std::size_t i = 0; i < dist.patterns(); ++i) {
        const double p = dist.probability(i);
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

EntropyEstimate entropy(const BitDistribution& dist) {
    EntropyEstimate e;
    e.plugin = plugin_entropy(dist);
    e.possible_bins = dist.patterns();
    e.samples = dist.samples();
    for (std::size_t i = 0; i < dist.patterns(); ++i) {
        if (dist.probability(i) > 0.0) ++e.observed_bins;
    }
    if (!dist.is_exact() && e.observed_bins > 0) {
        e.bias_correction = static_cast<double>(e.observed_bins - 1) * kLog2e /
                            (2.0 * static_cast<double>(dist.samples()));
    }
    return e;
}

double mutual_information(const BitDistribution& joint) {
    if (joint.width() != 2) {
        throw std::invalid_argument("mutual information needs a two-bit joint");
    }
    const double px1 = joint.probability(0b01) + joint.probability(0b11);
    const double py1 = joint.probability(0b10) + joint.probability(0b11);
    double mi = 0.0;
    for (std::size_t pattern = 0; pattern < 4; ++pattern) {
        const double p = joint.probability(pattern);
        if (p <= 0.0) continue;
        const double px = (pattern & 1) ? px1 : 1.0 - px1;
        const double py = (pattern & 2) ? py1 : 1.0 - py1;
        mi += p * std::log2(p / (px * py));
    }
    return std::max(mi, 0.0);
}

BitDistribution column_distribution(const SampleMatrix& s, std::span<const std::size_t> cols) {
    require_rows(s);
    for (auto c : cols) {
        if (c >= s.cols()) {
            throw std::out_of_range("column " + std::to_string(c) + " out of range");
        }
    }
    std::vector<std::uint64_t> counts(std::size_t{1} << cols.size(), 0);
    for (std::size_t r = 0; r < s.rows(); ++r) {
        std::size_t pattern = 0;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            pattern |= std::size_t{s.at(r, cols[i])} << i;
        }
        ++counts[pattern];
    }
    return BitDistribution::from_counts(std::move(counts));
}

MutualInformation pairwise_mi(const SampleMatrix& s, std::size_t i, std::size_t j) {
    if (i == j) {
        throw std::invalid_argument("pairwise MI needs two distinct columns");
    }
    if (s.rows() < 100) {
        throw std::invalid_argument("pairwise MI needs at least 100 samples");
    }
    const std::size_t cols[] = {i, j};
    const auto joint = column_distribution(s, cols);
    MutualInformation out;
    out.samples = s.rows();
    out.noise_floor = kLog2e / (2.0 * static_cast<double>(s.rows()));
    out.threshold = kMiNullQuantile * out.noise_floor;
    // A constant column carries no information about anything; the plug-in
    // value is already 0 there, this only pins it against rounding.
    const double px1 = joint.probability(0b01) + joint.probability(0b11);
    const double py1 = joint.probability(0b10) + joint.probability(0b11);
    const bool degenerate = px1 == 0.0 || px1 == 1.0 || py1 == 0.0 || py1 == 1.0;
    out.bits = degenerate ? 0.0 : mutual_information(joint);
    return out;
}

std::vector<PropensityEstimate> empirical_propensities(const SampleMatrix& s) {
    require_rows(s);
    const auto n = static_cast<double>(s.rows());
    std::vector<PropensityEstimate> out(s.cols());
    for (std::size_t c = 0; c < s.cols(); ++c) {
        std::uint64_t ones = 0;
        for (std::size_t r = 0; r < s.rows(); ++r) ones += s.at(r, c);
        const double f = static_cast<double>(ones) / n;
        out[c] = {f, 3.0 * std::sqrt(f * (1.0 - f) / n)};
    }
    return out;
}

EntropyEstimate block_entropy(const SampleMatrix& s, std::size_t length) {
    require_rows(s);
    check_block_length(s, length);
    const std::size_t last_start = s.cols() - length;
    if (s.pooling() == Pooling::Pooled) {
        return entropy(BitDistribution::from_counts(window_counts(s, length, 0, last_start)));
    }
    EntropyEstimate mean;
    mean.possible_bins = std::size_t{1} << length;
    mean.samples = s.rows();
    double observed = 0.0;
    const auto positions = static_cast<double>(last_start + 1);
    for (std::size_t start = 0; start <= last_start; ++start) {
        const auto e = entropy(BitDistribution::from_counts(window_counts(s, length, start, start)));
        mean.plugin += e.plugin / positions;
        mean.bias_correction += e.bias_correction / positions;
        observed += static_cast<double>(e.observed_bins);
    }
    mean.observed_bins = static_cast<std::size_t>(std::lround(observed / positions));
    return mean;
}

EntropyRate entropy_rate(std::span<const double> block_entropies) {
    if (block_entropies.size() < 2) {
        throw std::invalid_argument("entropy rate needs block lengths up to at least 2");
    }
    EntropyRate out;
    out.block_entropies.assign(block_entropies.begin(), block_entropies.end());
    for (std::size_t l = 0; l < block_entropies.size(); ++l) {
        out.per_symbol.push_back(block_entropies[l] / static_cast<double>(l + 1));
    }
    out.rate = block_entropies.back() - block_entropies[block_entropies.size() - 2];
    return out;
}

EntropyRate entropy_rate(const SampleMatrix& s, std::size_t max_length) {
    if (max_length < 2) {
        throw std::invalid_argument("entropy rate needs L_max >= 2");
    }
    std::vector<double> h;
    for (std::size_t l = 1; l <= max_length; ++l) {
        h.push_back(block_entropy(s, l).value());
    }
    return entropy_rate(h);
}

CandidateMeasures correlated_info_content(const BitDistribution& joint) {
    CandidateMeasures out;
    for (std::size_t b = 0; b < joint.width(); ++b) {
        const std::size_t bits[] = {b};
        const auto m = joint.marginal(bits);
        out.per_bit_terms.push_back(1.0 - plugin_entropy(m));
        out.per_bit_sum += out.per_bit_terms.back();
    }
    out.joint_entropy = entropy(joint).value();
    out.multi_information = static_cast<double>(joint.width()) - out.joint_entropy;
    return out;
}

CandidateMeasures correlated_info_content(const SampleMatrix& s, std::size_t d) {
    if (d == 0 || d > s.cols() || d > kMaxBlockLength) {
        throw std::invalid_argument("joint depth " + std::to_string(d) + " must lie in [1, min(" +
                                    std::to_string(s.cols()) + ", 16)]");
    }
    std::vector<std::size_t> cols(d);
    for (std::size_t i = 0; i < d; ++i) cols[i] = i;
    return correlated_info_content(column_distribution(s, cols));
}

CorrelationReport correlation_report(const SampleMatrix& s) {
    require_rows(s);
    CorrelationReport r;
    r.n_samples = s.rows();
    const auto props = empirical_propensities(s);
    const std::size_t d = s.cols();
    r.mi_matrix.assign(d, std::vector<double>(d, 0.0));
    r.significant.assign(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i) {
        r.marginals.push_back(props[i].frequency);
        r.mi_matrix[i][i] = h2(props[i].frequency);
    }
    r.noise_floor = kLog2e / (2.0 * static_cast<double>(s.rows()));
    r.threshold = kMiNullQuantile * r.noise_floor;
    if (s.rows() < 100) {
        return r;
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const auto mi = pairwise_mi(s, i, j);
            r.mi_matrix[i][j] = r.mi_matrix[j][i] = mi.bits;
            r.significant[i][j] = r.significant[j][i] = mi.significant();
        }
    }
    return r;
}

InfoReport info_report(const SampleMatrix& s, std::size_t max_length,
                       std::uint64_t generating_bits) {
    InfoReport r;
    r.measure_name = "sum of 1 - H(q_j) over empirical propensities";
    for (const auto& p : empirical_propensities(s)) {
        r.per_bit_terms.push_back(1.0 - h2(p.frequency));
        r.total += r.per_bit_terms.back();
    }
    std::vector<double> h;
    for (std::size_t l = 1; l <= max_length; ++l) {
        r.block_entropies.push_back(block_entropy(s, l));
        h.push_back(r.block_entropies.back().value());
    }
    const auto rate = entropy_rate(h);
    r.per_symbol_entropies = rate.per_symbol;
    r.entropy_rate_estimate = rate.rate;
    r.candidates = correlated_info_content(s, std::min(s.cols(), kMaxBlockLength));
    r.generating_bits = generating_bits;
    return r;
}

void to_json(nlohmann::json& j, const EntropyEstimate& e) {
    j = nlohmann::json{{"value", e.value()},
                       {"plugin", e.plugin},
                       {"miller_madow", e.bias_correction},
                       {"observed_bins", e.observed_bins},
                       {"possible_bins", e.possible_bins}};
}

void to_json(nlohmann::json& j, const CandidateMeasures& c) {
    j = nlohmann::json{
        {"per_bit_sum", {{"label", "sum of 1 - H(q_j), bits treated as independent"},
                         {"bits", c.per_bit_sum},
                         {"terms", c.per_bit_terms}}},
        {"multi_information", {{"label", "d - H(joint over d bits)"},
                               {"bits", c.multi_information},
                               {"joint_entropy", c.joint_entropy}}}};
}

void to_json(nlohmann::json& j, const CorrelationReport& r) {
    j = nlohmann::json{{"marginals", r.marginals},
                       {"mi_matrix", r.mi_matrix},
                       {"significant", r.significant},
                       {"n_samples", r.n_samples},
                       {"noise_floor", r.noise_floor},
                       {"threshold", r.threshold}};
}

void to_json(nlohmann::json& j, const InfoReport& r) {
    j = nlohmann::json{{"measure_name", r.measure_name},
                       {"per_bit_terms", r.per_bit_terms},
                       {"total", r.total},
                       {"block_entropies", r.block_entropies},
                       {"per_symbol_entropies", r.per_symbol_entropies},
                       {"entropy_rate_estimate", r.entropy_rate_estimate},
                       {"candidates", r.candidates},
                       {"generating_bits_count", r.generating_bits}};
}

}  // namespace fiq
