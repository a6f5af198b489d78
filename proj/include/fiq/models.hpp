#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fiq/propensity.hpp"
#include "fiq/random_bits.hpp"

namespace fiq {

/// Sampling past what the model specifies (an Unspecified tail).
class DepthBeyondKnowledge : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// An exhaustive enumeration would exceed its state bound.
class EnumerationBoundExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Realized bits 1..depth after the binary point.
struct BitPrefix {
    std::vector<std::uint8_t> bits;

    std::size_t depth() const { return bits.size(); }
    friend bool operator==(const BitPrefix&, const BitPrefix&) = default;
};

struct IndependentBitsModel {
    PropensityVector pv;
    RandomBitSource source{0};
};

/// FIQ bit j is the majority of the k source bits r(j), ..., r(j+k-1).
class MajorityVoteModel {
public:
    MajorityVoteModel(int k, RandomBitSource source);

    int k() const { return k_; }
    const RandomBitSource& source() const { return source_; }

private:
    int k_;
    RandomBitSource source_;
};

using FiqModel = std::variant<IndependentBitsModel, MajorityVoteModel>;

const RandomBitSource& source_of(const FiqModel& model);
FiqModel with_source(const FiqModel& model, const RandomBitSource& source);

/// Majority of an odd, non-empty window. Throws std::invalid_argument otherwise.
std::uint8_t majority(std::span<const std::uint8_t> window);

/// Observer for the source time indices consumed while sampling.
using DrawObserver = std::function<void(std::uint64_t)>;

BitPrefix sample_prefix(const FiqModel& model, std::size_t depth,
                        const DrawObserver& observer = {});

/// Reusable sampler for one (model, depth): validates once and precomputes
/// the per-position thresholds, then draws prefixes from any source stream.
class PrefixSampler {
public:
    PrefixSampler(const FiqModel& model, std::size_t depth);

    BitPrefix sample(std::uint64_t stream_id, const DrawObserver& observer = {}) const;

    std::size_t depth() const { return depth_; }

private:
    FiqModel model_;
    std::size_t depth_;
    std::vector<BitThreshold> thresholds_;
};

/// Number of source bits that determine the first `depth` FIQ bits.
std::uint64_t generating_bits_count(const FiqModel& model, std::uint64_t depth);

inline constexpr int kMaxEnumeratedSourceBits = 24;

/// Exact joint distribution of majority-vote FIQ bits at `positions`
/// (1-based, any order). Entry `mask` holds P(bit at positions[i] ==
/// ((mask >> i) & 1) for all i). Enumerates every configuration of the
/// source bits covering the windows.
std::vector<Rational> exact_window_joint(int k, const Propensity& bias,
                                         std::span<const std::uint64_t> positions);

/// Rows of realized prefixes, row i drawn from the model's source with
/// stream id (source.stream_id() + i). Work is split across `threads`;
/// the result does not depend on the thread count.
std::vector<BitPrefix> sample_rows(const FiqModel& model, std::size_t depth,
                                   std::size_t rows, unsigned threads = 1);

/// Runs fn(row) for row in [0, rows) on up to `threads` workers, each owning
/// a contiguous block of rows.
void parallel_rows(std::size_t rows, unsigned threads,
                   const std::function<void(std::size_t)>& fn);

void to_json(nlohmann::json& j, const FiqModel& model);
FiqModel model_from_json(const nlohmann::json& j);

}  // namespace fiq
