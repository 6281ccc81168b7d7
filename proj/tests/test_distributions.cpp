#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "uea/distributions.hpp"

namespace {

using uea::ErrorCode;
using uea::FlipDistribution;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const uea::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::BadInput;
}

TEST(Custom, ValidatesInput) {
  EXPECT_EQ(code_of([] { FlipDistribution::custom(3, {0.5, 0.5}); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { FlipDistribution::custom(2, {0.5, 0.7, -0.2}); }), ErrorCode::NegativeProbability);
  EXPECT_EQ(code_of([] { FlipDistribution::custom(2, {0.5, 0.4, 0.0}); }), ErrorCode::SumOutOfTolerance);
  EXPECT_NO_THROW(FlipDistribution::custom(2, {0.5, 0.5 + 5e-10, 0.0}));
}

TEST(Custom, MeanAndSupport) {
  const auto d = FlipDistribution::custom(4, {0.0, 0.25, 0.5, 0.0, 0.25});
  EXPECT_DOUBLE_EQ(d.mean(), 0.25 + 1.0 + 1.0);
  EXPECT_EQ(d.support(), (std::vector<std::size_t>{1, 2, 4}));
}

TEST(PointMass, Basics) {
  const auto d = FlipDistribution::point_mass(10, 1);
  EXPECT_EQ(d.p(1), 1.0);
  EXPECT_EQ(d.mean(), 1.0);
  EXPECT_EQ(code_of([] { FlipDistribution::point_mass(3, 4); }), ErrorCode::OutOfRange);
  uea::Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(d.sample(rng), 1u);
}

TEST(StandardBitMutation, MatchesBinomial) {
  const std::size_t n = 100;
  const auto d = FlipDistribution::standard_bit_mutation(n, 1.0);
  const double q = 0.01;
  for (std::size_t k : {0u, 1u, 2u, 5u, 10u}) {
    const double want = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                                 k * std::log(q) + (n - k) * std::log1p(-q));
    EXPECT_NEAR(d.p(k) / want, 1.0, 1e-12) << k;
  }
  EXPECT_NEAR(d.mean(), 1.0, 1e-12);
  EXPECT_NEAR(d.p(1), std::pow(1 - q, n - 1), 1e-14);
}

TEST(StandardBitMutation, RateBounds) {
  EXPECT_EQ(code_of([] { FlipDistribution::standard_bit_mutation(10, 0.0); }), ErrorCode::RateOutOfRange);
  EXPECT_EQ(code_of([] { FlipDistribution::standard_bit_mutation(10, 11.0); }), ErrorCode::RateOutOfRange);
  EXPECT_EQ(FlipDistribution::standard_bit_mutation(10, 10.0).p(10), 1.0);
}

TEST(StandardBitMutation, LargeNStaysNormalized) {
  const auto d = FlipDistribution::standard_bit_mutation(100000, 2.0);
  const double sum = std::accumulate(d.probs().begin(), d.probs().end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(d.mean(), 2.0, 1e-9);
}

TEST(PowerLaw, SupportIsOneToHalfN) {
  const auto d = FlipDistribution::power_law(10, 2.0);
  EXPECT_EQ(d.p(0), 0.0);
  EXPECT_EQ(d.p(6), 0.0);
  EXPECT_GT(d.p(5), 0.0);
  EXPECT_NEAR(d.p(1) / d.p(2), 4.0, 1e-12);
  EXPECT_EQ(code_of([] { FlipDistribution::power_law(10, 1.0); }), ErrorCode::BetaOutOfRange);
}

TEST(ConditionNonzero, RescalesRemainder) {
  const auto d = FlipDistribution::custom(3, {0.3, 0.7, 0.0, 0.0});
  const auto c = d.condition_nonzero();
  EXPECT_EQ(c.p(0), 0.0);
  EXPECT_NEAR(c.p(1), 1.0, 1e-15);
  EXPECT_EQ(code_of([] { FlipDistribution::point_mass(4, 0).condition_nonzero(); }), ErrorCode::DegenerateAllZero);
}

TEST(Sampling, FrequenciesMatchProbabilities) {
  const auto d = FlipDistribution::custom(5, {0.1, 0.2, 0.3, 0.0, 0.4, 0.0});
  uea::Rng rng(42);
  std::vector<int> counts(6, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[d.sample(rng)];
  EXPECT_EQ(counts[3], 0);
  EXPECT_EQ(counts[5], 0);
  for (std::size_t k = 0; k <= 5; ++k) {
    const double p = d.p(k);
    const double sd = std::sqrt(draws * p * (1 - p));
    EXPECT_NEAR(counts[k], draws * p, 5 * sd + 1) << k;
  }
}

TEST(Cumulative, MonotoneAndEndsAtOne) {
  for (const auto& d : {FlipDistribution::standard_bit_mutation(500, 3.0), FlipDistribution::power_law(500, 1.5)}) {
    const auto& c = d.cumulative();
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    EXPECT_EQ(c.back(), 1.0);
  }
}

}  // namespace
