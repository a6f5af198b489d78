#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fiq/estimators.hpp"
#include "oracles.hpp"

using namespace fiq;

namespace {

SampleMatrix enumerated_k3(std::size_t d, Pooling pooling = Pooling::Pooled) {
    auto data = oracle::majority_enumeration(3, d);
    const std::size_t rows = data.size() / d;
    return SampleMatrix(rows, d, std::move(data), pooling);
}

SampleMatrix fair_iid(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    const FiqModel model = IndependentBitsModel{{{}, TailPolicy::HalfTail}, RandomBitSource(seed)};
    const auto prefixes = sample_rows(model, cols, rows, 1);
    return SampleMatrix::from_prefixes(prefixes, Pooling::PerPosition);
}

}  // namespace

TEST(SampleMatrix, ShapeChecks) {
    EXPECT_THROW(SampleMatrix(2, 2, {0, 1, 1}), std::invalid_argument);
    EXPECT_THROW(SampleMatrix(1, 2, {0, 2}), std::invalid_argument);
    const SampleMatrix s(2, 3, {0, 1, 1, 1, 0, 0});
    EXPECT_EQ(s.at(0, 1), 1);
    EXPECT_EQ(s.at(1, 2), 0);
    const std::vector<BitPrefix> ragged{BitPrefix{{1, 0}}, BitPrefix{{1}}};
    EXPECT_THROW(SampleMatrix::from_prefixes(ragged, Pooling::Pooled), std::invalid_argument);
}

TEST(BitDistribution, ProbabilitiesAndMarginals) {
    const auto d = BitDistribution::from_counts({1, 2, 3, 4});
    EXPECT_EQ(d.width(), 2u);
    EXPECT_EQ(d.samples(), 10u);
    EXPECT_DOUBLE_EQ(d.probability(3), 0.4);
    const std::size_t second[] = {1};
    const auto m = d.marginal(second);
    EXPECT_DOUBLE_EQ(m.probability(1), 0.7);
    const std::size_t swapped[] = {1, 0};
    EXPECT_DOUBLE_EQ(d.marginal(swapped).probability(0b01), 0.3);
    const std::size_t bad[] = {2};
    EXPECT_THROW(d.marginal(bad), std::out_of_range);
    EXPECT_THROW(BitDistribution::from_counts({1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(BitDistribution::from_counts({0, 0}), std::invalid_argument);
    EXPECT_THROW(BitDistribution::exact(std::vector<double>{-1.0, 2.0}), std::invalid_argument);
    EXPECT_TRUE(BitDistribution::exact(std::vector<double>{0.5, 0.5}).is_exact());
}

TEST(Entropy, MillerMadowTerm) {
    const auto e = entropy(BitDistribution::from_counts({30, 0, 50, 20}));
    EXPECT_EQ(e.observed_bins, 3u);
    EXPECT_EQ(e.possible_bins, 4u);
    EXPECT_NEAR(e.plugin, oracle::entropy({0.3L, 0.5L, 0.2L}), 1e-15);
    EXPECT_NEAR(e.bias_correction, 2.0 * std::numbers::log2e / 200.0, 1e-15);
    const auto exact = entropy(BitDistribution::exact(std::vector<double>{0.3, 0.0, 0.5, 0.2}));
    EXPECT_EQ(exact.bias_correction, 0.0);
    EXPECT_EQ(exact.value(), exact.plugin);
}

TEST(MutualInformation, ExactTables) {
    const std::vector<Rational> k3{Rational(3, 8), Rational(1, 8), Rational(1, 8), Rational(3, 8)};
    EXPECT_NEAR(mutual_information(BitDistribution::exact(k3)), oracle::kMajority3AdjacentMi, 1e-12);
    const std::vector<double> product{0.06, 0.14, 0.24, 0.56};
    EXPECT_NEAR(mutual_information(BitDistribution::exact(product)), 0.0, 1e-15);
    const std::vector<double> copy{0.5, 0.0, 0.0, 0.5};
    EXPECT_NEAR(mutual_information(BitDistribution::exact(copy)), 1.0, 1e-15);
    EXPECT_THROW(mutual_information(BitDistribution::exact(std::vector<double>{0.5, 0.5})),
                 std::invalid_argument);
    // Against the long-double oracle on an asymmetric table.
    const std::vector<Rational> cells{Rational(149, 1022), Rational(277, 1022), Rational(79, 292),
                                      Rational(639, 2044)};
    EXPECT_NEAR(mutual_information(BitDistribution::exact(cells)),
                static_cast<double>(oracle::mutual_information(cells)), 1e-15);
    EXPECT_NEAR(mutual_information(BitDistribution::exact(cells)), 0.0094715716888076753, 1e-12);
}

TEST(PairwiseMi, EnumeratedJointIsExact) {
    const auto s = enumerated_k3(6);
    EXPECT_NEAR(pairwise_mi(s, 0, 1).bits, oracle::kMajority3AdjacentMi, 1e-12);
    EXPECT_NEAR(pairwise_mi(s, 2, 3).bits, oracle::kMajority3AdjacentMi, 1e-12);
    EXPECT_NEAR(pairwise_mi(s, 0, 3).bits, 0.0, 1e-12);
    EXPECT_NEAR(pairwise_mi(s, 1, 5).bits, 0.0, 1e-12);
    const auto joint = exact_window_joint(3, Propensity::half(), std::vector<std::uint64_t>{1, 3});
    EXPECT_NEAR(pairwise_mi(s, 0, 2).bits,
                static_cast<double>(oracle::mutual_information(joint)), 1e-12);
}

TEST(PairwiseMi, ThresholdAndGuards) {
    const auto s = fair_iid(5000, 4, 3);
    const auto mi = pairwise_mi(s, 0, 1);
    EXPECT_DOUBLE_EQ(mi.noise_floor, std::numbers::log2e / 10000.0);
    EXPECT_DOUBLE_EQ(mi.threshold, kMiNullQuantile * mi.noise_floor);
    EXPECT_THROW(pairwise_mi(s, 1, 1), std::invalid_argument);
    EXPECT_THROW(pairwise_mi(fair_iid(99, 2, 3), 0, 1), std::invalid_argument);
    std::vector<std::uint8_t> data;
    for (int r = 0; r < 200; ++r) {
        data.push_back(1);
        data.push_back(static_cast<std::uint8_t>(r % 2));
    }
    const auto constant = pairwise_mi(SampleMatrix(200, 2, data), 0, 1);
    EXPECT_EQ(constant.bits, 0.0);
    EXPECT_EQ(constant.thresholded(), 0.0);
}

TEST(PairwiseMi, FalsePositiveRateOnIndependentBits) {
    // 100 independent datasets at reduced N: the 1e-4 null quantile should
    // essentially never fire.
    int fired = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = fair_iid(2000, 2, seed);
        fired += pairwise_mi(s, 0, 1).significant();
    }
    EXPECT_LE(fired, 1);
}

TEST(PairwiseMi, DetectsAdjacentMajorityCorrelationAcrossSeeds) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const FiqModel model = MajorityVoteModel(3, RandomBitSource(seed));
        const auto rows = sample_rows(model, 4, 2000, 1);
        const auto s = SampleMatrix::from_prefixes(rows, Pooling::Pooled);
        EXPECT_TRUE(pairwise_mi(s, 0, 1).significant()) << seed;
    }
}

TEST(BlockEntropy, EnumeratedMajorityMatchesClosedForm) {
    const auto s = enumerated_k3(10);
    for (std::size_t l = 1; l <= 9; ++l) {
        EXPECT_NEAR(block_entropy(s, l).plugin, oracle::kMajority3BlockEntropy[l - 1], 1e-9) << l;
    }
    const auto per_position = enumerated_k3(10, Pooling::PerPosition);
    for (std::size_t l = 1; l <= 9; ++l) {
        EXPECT_NEAR(block_entropy(per_position, l).plugin, oracle::kMajority3BlockEntropy[l - 1], 1e-9);
    }
    EXPECT_THROW(block_entropy(s, 0), std::invalid_argument);
    EXPECT_THROW(block_entropy(s, 11), std::invalid_argument);
}

TEST(BlockEntropy, ExactJointAgrees) {
    for (std::size_t l = 1; l <= 9; ++l) {
        std::vector<std::uint64_t> pos;
        for (std::uint64_t i = 1; i <= l; ++i) pos.push_back(i);
        const auto joint = BitDistribution::exact(exact_window_joint(3, Propensity::half(), pos));
        EXPECT_NEAR(entropy(joint).value(), oracle::kMajority3BlockEntropy[l - 1], 1e-9);
    }
}

TEST(EntropyRate, FromExactBlockEntropies) {
    const std::span<const double> h(oracle::kMajority3BlockEntropy, 8);
    const auto rate = entropy_rate(h);
    EXPECT_NEAR(rate.rate, oracle::kMajority3RateAt8, 1e-12);
    EXPECT_NEAR(rate.per_symbol[1], oracle::kMajority3BlockEntropy[1] / 2, 1e-15);
    EXPECT_THROW(entropy_rate(h.first(1)), std::invalid_argument);
}

TEST(EntropyRate, FairIidIsOneBitPerSymbol) {
    const auto s = fair_iid(100000, 16, 77);
    const auto rate = entropy_rate(s, 8);
    EXPECT_NEAR(rate.rate, 1.0, 0.02);
    for (double h : rate.per_symbol) EXPECT_NEAR(h, 1.0, 0.01);
}

TEST(CorrelatedInfoContent, ExactMajorityJoint) {
    for (std::size_t d = 1; d <= 9; ++d) {
        std::vector<std::uint64_t> pos;
        for (std::uint64_t i = 1; i <= d; ++i) pos.push_back(i);
        const auto c = correlated_info_content(
            BitDistribution::exact(exact_window_joint(3, Propensity::half(), pos)));
        EXPECT_NEAR(c.per_bit_sum, 0.0, 1e-12);
        EXPECT_NEAR(c.joint_entropy, oracle::kMajority3BlockEntropy[d - 1], 1e-9);
        EXPECT_NEAR(c.multi_information, static_cast<double>(d) - oracle::kMajority3BlockEntropy[d - 1],
                    1e-9);
    }
}

TEST(CorrelatedInfoContent, ExactIndependentJointReducesToPerBitSum) {
    // Two independent bits with propensity 3/4: the joint gives back 2(1 - H(1/4)).
    const std::vector<double> joint{1.0 / 16, 3.0 / 16, 3.0 / 16, 9.0 / 16};
    const auto c = correlated_info_content(BitDistribution::exact(joint));
    EXPECT_NEAR(c.per_bit_sum, 2 * 0.1887218755408671361, 1e-12);
    EXPECT_NEAR(c.multi_information, c.per_bit_sum, 1e-12);
}

TEST(EmpiricalPropensities, HalfWidth) {
    const SampleMatrix s(4, 1, {1, 1, 1, 0});
    const auto p = empirical_propensities(s);
    EXPECT_DOUBLE_EQ(p[0].frequency, 0.75);
    EXPECT_DOUBLE_EQ(p[0].half_width, 3 * std::sqrt(0.75 * 0.25 / 4));
}

TEST(CorrelationReport, ShapeAndDiagonal) {
    const FiqModel model = MajorityVoteModel(3, RandomBitSource(2));
    const auto rows = sample_rows(model, 6, 20000, 1);
    const auto r = correlation_report(SampleMatrix::from_prefixes(rows, Pooling::Pooled));
    ASSERT_EQ(r.mi_matrix.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_NEAR(r.mi_matrix[i][i], 1.0, 1e-3);
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(r.mi_matrix[i][j], r.mi_matrix[j][i]);
            if (i != j) {
                const std::size_t dist = i > j ? i - j : j - i;
                EXPECT_EQ(r.significant[i][j], dist < 3) << i << "," << j;
            }
        }
    }
    const nlohmann::json j = r;
    EXPECT_EQ(j["n_samples"], 20000);
}

TEST(InfoReport, Fields) {
    const auto s = enumerated_k3(8);
    const auto r = info_report(s, 4, 10);
    EXPECT_EQ(r.block_entropies.size(), 4u);
    EXPECT_EQ(r.per_symbol_entropies.size(), 4u);
    EXPECT_EQ(r.generating_bits, 10u);
    EXPECT_NEAR(r.total, 0.0, 1e-12);
    EXPECT_NEAR(r.entropy_rate_estimate,
                r.block_entropies[3].value() - r.block_entropies[2].value(), 1e-15);
    EXPECT_FALSE(nlohmann::json(r).dump().empty());
}

TEST(Pooling, ForModels) {
    EXPECT_EQ(pooling_for(MajorityVoteModel(3, RandomBitSource(0))), Pooling::Pooled);
    EXPECT_EQ(pooling_for(IndependentBitsModel{}), Pooling::PerPosition);
}
