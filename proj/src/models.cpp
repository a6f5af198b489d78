#include "fiq/models.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <mutex>
#include <thread>

namespace fiq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_k(int k) {
    if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument("majority window k must be an odd positive integer, got " +
                                    std::to_string(k));
    }
}

}  // namespace

MajorityVoteModel::MajorityVoteModel(int k, RandomBitSource source)
    : k_(k), source_(std::move(source)) {
    check_k(k);
}

const RandomBitSource& source_of(const FiqModel& model) {
    return std::visit(overloaded{[](const IndependentBitsModel& m) -> const RandomBitSource& {
                                     return m.source;
                                 },
                                 [](const MajorityVoteModel& m) -> const RandomBitSource& {
                                     return m.source();
                                 }},
                      model);
}

FiqModel with_source(const FiqModel& model, const RandomBitSource& source) {
    return std::visit(overloaded{[&](const IndependentBitsModel& m) -> FiqModel {
                                     return IndependentBitsModel{m.pv, source};
                                 },
                                 [&](const MajorityVoteModel& m) -> FiqModel {
                                     return MajorityVoteModel(m.k(), source);
                                 }},
                      model);
}

std::uint8_t majority(std::span<const std::uint8_t> window) {
    if (window.empty() || window.size() % 2 == 0) {
        throw std::invalid_argument("majority needs an odd, non-empty window");
    }
    const auto ones = std::count_if(window.begin(), window.end(), [](auto b) { return b != 0; });
    return static_cast<std::size_t>(ones) * 2 > window.size() ? 1 : 0;
}

PrefixSampler::PrefixSampler(const FiqModel& model, std::size_t depth)
    : model_(model), depth_(depth) {
    if (const auto* m = std::get_if<IndependentBitsModel>(&model)) {
        if (m->pv.tail == TailPolicy::Unspecified && depth > m->pv.prefix.size()) {
            throw DepthBeyondKnowledge("cannot sample " + std::to_string(depth) +
                                       " bits: propensities are only specified for " +
                                       std::to_string(m->pv.prefix.size()));
        }
        thresholds_.reserve(depth);
        for (std::size_t j = 1; j <= depth; ++j) {
            thresholds_.emplace_back(m->pv.at(j));
        }
    }
}

BitPrefix PrefixSampler::sample(std::uint64_t stream_id, const DrawObserver& observer) const {
    const RandomBitSource source = source_of(model_).with_stream(stream_id);
    BitPrefix out;
    out.bits.reserve(depth_);
    if (std::holds_alternative<IndependentBitsModel>(model_)) {
        for (std::size_t j = 1; j <= depth_; ++j) {
            if (observer) {
                observer(j);
            }
            out.bits.push_back(source.draw(j, thresholds_[j - 1]) ? 1 : 0);
        }
        return out;
    }
    if (depth_ == 0) {
        return out;
    }
    const auto k = static_cast<std::size_t>(std::get<MajorityVoteModel>(model_).k());
    std::vector<std::uint8_t> bits(depth_ + k - 1);
    for (std::size_t n = 1; n <= bits.size(); ++n) {
        if (observer) {
            observer(n);
        }
        bits[n - 1] = source.bit(n) ? 1 : 0;
    }
    const std::span<const std::uint8_t> all(bits);
    for (std::size_t j = 0; j < depth_; ++j) {
        out.bits.push_back(majority(all.subspan(j, k)));
    }
    return out;
}

BitPrefix sample_prefix(const FiqModel& model, std::size_t depth, const DrawObserver& observer) {
    return PrefixSampler(model, depth).sample(source_of(model).stream_id(), observer);
}

std::uint64_t generating_bits_count(const FiqModel& model, std::uint64_t depth) {
    if (const auto* m = std::get_if<MajorityVoteModel>(&model)) {
        return depth == 0 ? 0 : depth + static_cast<std::uint64_t>(m->k()) - 1;
    }
    return depth;
}

std::vector<Rational> exact_window_joint(int k, const Propensity& bias,
                                         std::span<const std::uint64_t> positions) {
    check_k(k);
    if (positions.empty()) {
        throw std::invalid_argument("exact_window_joint needs at least one position");
    }
    if (std::find(positions.begin(), positions.end(), 0u) != positions.end()) {
        throw std::invalid_argument("bit positions start at 1");
    }
    const auto [lo_it, hi_it] = std::minmax_element(positions.begin(), positions.end());
    const std::uint64_t lo = *lo_it;
    const std::uint64_t span = *hi_it - lo + static_cast<std::uint64_t>(k);
    if (span > kMaxEnumeratedSourceBits || positions.size() > kMaxEnumeratedSourceBits) {
        throw EnumerationBoundExceeded("windows cover " + std::to_string(span) +
                                       " source bits; the exact oracle is limited to " +
                                       std::to_string(kMaxEnumeratedSourceBits));
    }

    // Tally configurations by (output pattern, number of ones); weights are
    // applied once per class afterwards.
    const std::size_t patterns = std::size_t{1} << positions.size();
    std::vector<std::vector<std::uint64_t>> counts(patterns,
                                                   std::vector<std::uint64_t>(span + 1, 0));
    const std::uint32_t window_mask = (1u << k) - 1;
    for (std::uint32_t config = 0; config < (1u << span); ++config) {
        std::size_t pattern = 0;
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const auto offset = static_cast<unsigned>(positions[i] - lo);
            const int ones = std::popcount((config >> offset) & window_mask);
            if (2 * ones > k) {
                pattern |= std::size_t{1} << i;
            }
        }
        ++counts[pattern][std::popcount(config)];
    }

    const Rational p = bias.value();
    const Rational q = 1 - p;
    std::vector<Rational> weight(span + 1);
    for (std::uint64_t ones = 0; ones <= span; ++ones) {
        Rational w = 1;
        for (std::uint64_t i = 0; i < ones; ++i) w *= p;
        for (std::uint64_t i = ones; i < span; ++i) w *= q;
        weight[ones] = w;
    }
    std::vector<Rational> joint(patterns);
    for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
        for (std::uint64_t ones = 0; ones <= span; ++ones) {
            if (counts[pattern][ones] != 0) {
                joint[pattern] += weight[ones] * Rational(counts[pattern][ones]);
            }
        }
    }
    return joint;
}

void parallel_rows(std::size_t rows, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(rows, 1));
    if (workers == 1) {
        for (std::size_t r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = rows * w / workers;
        const std::size_t end = rows * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t r = begin; r < end; ++r) fn(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<BitPrefix> sample_rows(const FiqModel& model, std::size_t depth, std::size_t rows,
                                   unsigned threads) {
    const PrefixSampler sampler(model, depth);
    const std::uint64_t base = source_of(model).stream_id();
    std::vector<BitPrefix> out(rows);
    parallel_rows(rows, threads, [&](std::size_t r) { out[r] = sampler.sample(base + r); });
    return out;
}

void to_json(nlohmann::json& j, const FiqModel& model) {
    std::visit(overloaded{[&](const IndependentBitsModel& m) {
                              j = nlohmann::json{{"type", "independent"},
                                                 {"pv", m.pv},
                                                 {"seed", m.source.seed()},
                                                 {"stream", m.source.stream_id()}};
                          },
                          [&](const MajorityVoteModel& m) {
                              j = nlohmann::json{{"type", "majority"},
                                                 {"k", m.k()},
                                                 {"bias", m.source().bias()},
                                                 {"seed", m.source().seed()},
                                                 {"stream", m.source().stream_id()}};
                          }},
               model);
}

FiqModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("model must be a JSON object");
    }
    const auto type = j.value("type", std::string());
    const auto seed = j.value<std::uint64_t>("seed", 0);
    const auto stream = j.value<std::uint64_t>("stream", 0);
    if (type == "independent") {
        if (!j.contains("pv")) {
            throw std::invalid_argument("independent model needs a \"pv\" field");
        }
        return IndependentBitsModel{j.at("pv").get<PropensityVector>(),
                                    RandomBitSource(seed, Propensity::half(), stream)};
    }
    if (type == "majority") {
        if (!j.contains("k") || !j.at("k").is_number_integer()) {
            throw std::invalid_argument("majority model needs an integer \"k\" field");
        }
        const Propensity bias =
            j.contains("bias") ? j.at("bias").get<Propensity>() : Propensity::half();
        return MajorityVoteModel(j.at("k").get<int>(), RandomBitSource(seed, bias, stream));
    }
    throw std::invalid_argument("model type must be \"independent\" or \"majority\", got '" +
                                type + "'");
}

}  // namespace fiq
