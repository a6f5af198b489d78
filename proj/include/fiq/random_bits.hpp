#pragma once

#include <array>
#include <cstdint>

#include "fiq/propensity.hpp"

namespace fiq {

/// Philox4x32-10 block function (Salmon et al., SC'11). Counter-based: every
/// output block is a pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

/// Precomputed comparison target for drawing a bit with an exact rational
/// propensity. The bit is 1 iff a uniform U in [0,1) satisfies U < q,
/// decided chunk by chunk over the binary expansions of U and q, so
/// P(bit = 1) equals q exactly.
class BitThreshold {
public:
    explicit BitThreshold(const Propensity& q);

    const Propensity& propensity() const { return q_; }

private:
    friend class RandomBitSource;

    Propensity q_;
    bool always_one_ = false;
    std::uint64_t first_chunk_ = 0;
};

/// Stream of fresh random bits r(1), r(2), ... for a given (seed, stream_id).
/// Bits at distinct time indices are independent; the same triple
/// (seed, bias, stream_id) always reproduces the same sequence.
class RandomBitSource {
public:
    explicit RandomBitSource(std::uint64_t seed, Propensity bias = Propensity::half(),
                             std::uint64_t stream_id = 0);

    /// r(n) with the source's own bias. n >= 1.
    bool bit(std::uint64_t n) const { return draw(n, threshold_); }

    /// The bit at time n drawn against an arbitrary propensity, reusing the
    /// uniform variate of time n. Used for independent-bit models where each
    /// position carries its own propensity.
    bool draw(std::uint64_t n, const BitThreshold& threshold) const;

    /// 64-bit chunk `lane` of the uniform variate at time n.
    std::uint64_t uniform_chunk(std::uint64_t n, std::uint32_t lane) const;

    RandomBitSource with_stream(std::uint64_t stream_id) const {
        return RandomBitSource(seed_, threshold_.propensity(), stream_id);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    const Propensity& bias() const { return threshold_.propensity(); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    BitThreshold threshold_;
};

}  // namespace fiq
