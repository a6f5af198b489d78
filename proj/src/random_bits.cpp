#include "fiq/random_bits.hpp"

#include <stdexcept>

namespace fiq {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Time indices use the low 48 bits of the counter's upper half; the
// remaining 16 bits select the lane (two 64-bit chunks per lane).
constexpr std::uint64_t kMaxTime = (std::uint64_t{1} << 48) - 1;
constexpr std::uint32_t kMaxChunks = 2u << 16;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                         std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

BitThreshold::BitThreshold(const Propensity& q) : q_(q) {
    if (q.value() == 1) {
        always_one_ = true;
        return;
    }
    first_chunk_ = static_cast<std::uint64_t>(floor(q.value() * pow2(64)));
}

RandomBitSource::RandomBitSource(std::uint64_t seed, Propensity bias, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), threshold_(bias) {}

std::uint64_t RandomBitSource::uniform_chunk(std::uint64_t n, std::uint32_t lane) const {
    if (n > kMaxTime) {
        throw std::out_of_range("time index exceeds 2^48");
    }
    if (lane >= kMaxChunks) {
        throw std::out_of_range("uniform variate exhausted");
    }
    const std::uint64_t hi = n | (std::uint64_t{lane / 2} << 48);
    const auto block = philox4x32(
        {static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32),
         static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    const std::size_t off = (lane % 2) * 2;
    return (std::uint64_t{block[off]} << 32) | block[off + 1];
}

bool RandomBitSource::draw(std::uint64_t n, const BitThreshold& threshold) const {
    if (threshold.always_one_) {
        return true;
    }
    const std::uint64_t w = uniform_chunk(n, 0);
    if (w != threshold.first_chunk_) {
        return w < threshold.first_chunk_;
    }
    // Tie on the first 64 bits: continue along the exact expansion of q.
    Rational rest = threshold.q_.value() * pow2(64) - Rational(threshold.first_chunk_);
    for (std::uint32_t lane = 1;; ++lane) {
        if (rest == 0) {
            return false;
        }
        rest *= pow2(64);
        const auto chunk = static_cast<std::uint64_t>(floor(rest));
        rest -= Rational(chunk);
        const std::uint64_t u = uniform_chunk(n, lane);
        if (u != chunk) {
            return u < chunk;
        }
    }
}

}  // namespace fiq
