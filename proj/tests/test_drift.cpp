#include <gtest/gtest.h>

#include <cmath>

#include "uea/drift.hpp"
#include "uea/oracle.hpp"

namespace {

using uea::FlipDistribution;
using uea::Objective;
namespace drift = uea::drift;

TEST(Hypergeom, Examples) {
  EXPECT_NEAR(drift::hypergeom_pmf(4, 2, 2, 2), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(drift::hypergeom_pmf(10, 1, 3, 1), 0.3, 1e-15);
  EXPECT_EQ(drift::hypergeom_pmf(10, 3, 2, 3), 0.0);
  EXPECT_EQ(drift::hypergeom_pmf(10, 9, 2, 0), 0.0);
}

TEST(Hypergeom, Normalized) {
  for (std::size_t n = 1; n <= 200; n += (n < 20 ? 1 : 13)) {
    for (std::size_t r = 0; r <= n; r += std::max<std::size_t>(1, n / 7)) {
      for (std::size_t d = 0; d <= n; d += std::max<std::size_t>(1, n / 5)) {
        double sum = 0.0;
        for (std::size_t i = 0; i <= std::min(r, d); ++i) sum += drift::hypergeom_pmf(n, r, d, i);
        ASSERT_NEAR(sum, 1.0, 1e-12) << n << ' ' << r << ' ' << d;
        const auto row = drift::hypergeom_row(n, r, d);
        for (std::size_t i = 0; i < row.size(); ++i) {
          ASSERT_NEAR(row[i], drift::hypergeom_pmf(n, r, d, i), 1e-13) << n << ' ' << r << ' ' << d << ' ' << i;
        }
      }
    }
  }
}

TEST(B, Examples) {
  EXPECT_NEAR(drift::B(10, 3, 1), 0.3, 1e-15);
  EXPECT_NEAR(drift::B(10, 3, 2), 6.0 / 45.0, 1e-15);
  EXPECT_NEAR(drift::B(4, 2, 2), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(drift::B(10, 2, 9), 0.0);
  EXPECT_EQ(drift::B(10, 0, 3), 0.0);
  EXPECT_THROW(drift::B(10, 3, 0), uea::Error);
  EXPECT_THROW(drift::B(10, 3, 11), uea::Error);
}

TEST(B, SingleAndDoubleFlipClosedForms) {
  for (std::size_t n : {5u, 17u, 100u}) {
    for (std::size_t d = 0; d <= n / 2; ++d) {
      EXPECT_NEAR(drift::B(n, d, 1), double(d) / n, 1e-15);
      EXPECT_NEAR(drift::B(n, d, 2), 2.0 * d * (d - 1.0) / (n * (n - 1.0)), 1e-15);
    }
  }
}

TEST(B, NonDecreasingInDistance) {
  for (std::size_t n : {8u, 31u, 120u}) {
    for (std::size_t r = 1; r <= n; ++r) {
      for (std::size_t d = 1; d <= n; ++d) ASSERT_GE(drift::B(n, d, r), drift::B(n, d - 1, r) - 1e-15);
    }
  }
}

TEST(B, MatchesRationalEvaluation) {
  for (std::size_t n = 1; n <= 30; ++n) {
    for (std::size_t r = 1; r <= n; ++r) {
      for (std::size_t d = 0; d <= n; ++d) {
        const double want = static_cast<double>(uea::oracle::exact::B(n, d, r));
        ASSERT_NEAR(drift::B(n, d, r), want, 1e-13 * std::max(1.0, want)) << n << ' ' << d << ' ' << r;
      }
    }
  }
}

TEST(HTilde, Examples) {
  const auto rls = FlipDistribution::point_mass(10, 1);
  const auto mirror = FlipDistribution::point_mass(10, 9);
  EXPECT_NEAR(drift::h_tilde(rls, 2), 0.2, 1e-15);
  EXPECT_NEAR(drift::h_tilde(mirror, 2), 0.2, 1e-15);
  EXPECT_EQ(drift::h_tilde(FlipDistribution::standard_bit_mutation(10, 1.0), 0), 0.0);
  EXPECT_THROW(drift::h_tilde(rls, 6), uea::Error);
}

// Drift from r and n - r flips coincide, so a distribution and its mirror
// image k -> n - k have the same h~.
TEST(HTilde, MirrorSymmetry) {
  const std::size_t n = 21;
  const auto d = FlipDistribution::power_law(n, 1.7);
  std::vector<double> flipped(n + 1);
  for (std::size_t k = 0; k <= n; ++k) flipped[k] = d.p(n - k);
  const auto m = FlipDistribution::custom(n, flipped);
  for (std::size_t dist = 0; dist <= n / 2; ++dist) EXPECT_NEAR(drift::h_tilde(d, dist), drift::h_tilde(m, dist), 1e-14);
}

// h~(d) >= (p_1 + p_{n-1}) d/n since every B is non-negative.
TEST(HTilde, AtLeastSingleFlipTerm) {
  const std::size_t n = 60;
  for (const auto& d : {FlipDistribution::standard_bit_mutation(n, 1.0), FlipDistribution::power_law(n, 1.2),
                        FlipDistribution::point_mass(n, 7)}) {
    for (std::size_t dist = 0; dist <= n / 2; ++dist) {
      EXPECT_GE(drift::h_tilde(d, dist) + 1e-15, drift::p1_plus_pn1(d) * dist / n);
    }
  }
}

TEST(D0, Examples) {
  EXPECT_EQ(drift::d0(FlipDistribution::point_mass(1000, 1)), 20u);
  EXPECT_EQ(drift::d0(FlipDistribution::point_mass(8, 1)), 1u);
  EXPECT_EQ(drift::d0(FlipDistribution::point_mass(1000, 2)), 0u);
}

TEST(DriftTable, Examples) {
  const auto t = drift::drift_table(FlipDistribution::point_mass(1000, 1), 40);
  ASSERT_EQ(t.rows.size(), 41u);
  EXPECT_EQ(t.d0, 20u);
  EXPECT_EQ(t.rows[0].h_tilde, 0.0);
  EXPECT_NEAR(t.rows[5].h, 0.005, 1e-15);
  EXPECT_EQ(t.rows[21].h, 1000.0);
  for (std::size_t d = 0; d < t.rows.size(); ++d) EXPECT_EQ(t.rows[d].d, d);
}

TEST(PotentialWeights, Examples) {
  const auto rls = FlipDistribution::point_mass(11, 1);
  const auto pw = drift::potential_weights(rls, 2.0, Objective::onemax(11));
  EXPECT_NEAR(pw.gamma[2], 1.44, 1e-14);
  for (std::size_t i = 0; i < 11; ++i) EXPECT_NEAR(pw.gamma[i], std::pow(1.2, double(i)), 1e-12);
  for (double g : pw.g) EXPECT_EQ(g, 1.0);

  const auto x = uea::BitString::from_string("01101000111");
  EXPECT_EQ(drift::wrong_bit_potential(pw, x), double(x.count_zeros()));
  EXPECT_EQ(drift::wrong_bit_potential(pw, uea::BitString::ones(11)), 0.0);
  EXPECT_EQ(drift::potential(pw, uea::BitString::zeros(11)), 0.0);
}

TEST(PotentialWeights, GRule) {
  const std::size_t n = 10;
  const std::vector<double> w = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55};
  const auto d = FlipDistribution::standard_bit_mutation(n, 1.0);
  const auto pw = drift::potential_weights(d, 2.0, w);
  EXPECT_EQ(pw.g[0], 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    EXPECT_LE(pw.g[i], pw.gamma[i]);
    EXPECT_LE(pw.g[i], pw.g[i - 1] * w[i] / w[i - 1] * (1 + 1e-15));
    EXPECT_GE(pw.g[i], pw.g[i - 1]);
  }
  uea::Rng rng(3);
  double total = 0.0;
  for (double g : pw.g) total += g;
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = uea::BitString::random(n, rng);
    const double v = drift::potential(pw, x);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, total);
  }
}

TEST(PotentialWeights, Errors) {
  const auto sbm = FlipDistribution::standard_bit_mutation(5, 1.0);
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const uea::Error& e) {
      return e.code();
    }
    return uea::ErrorCode::BadInput;
  };
  EXPECT_EQ(code([&] { drift::potential_weights(FlipDistribution::point_mass(5, 2), 2.0, Objective::onemax(5)); }),
            uea::ErrorCode::ZeroP1);
  EXPECT_EQ(code([&] { drift::potential_weights(sbm, 1.0, Objective::onemax(5)); }),
            uea::ErrorCode::NonPositiveAlphaMargin);
  const std::vector<double> short_w = {1, 2};
  EXPECT_EQ(code([&] { drift::potential_weights(sbm, 2.0, short_w); }), uea::ErrorCode::LengthMismatch);
  EXPECT_THROW(drift::potential_weights(sbm, 2.0, Objective::anchored(5, 3.0)), uea::Error);
}

TEST(UpperBound, Example) {
  const auto ub = drift::upper_bound_b(FlipDistribution::point_mass(100, 1), 2.0, 1.0);
  EXPECT_NEAR(ub.bound, 200.0 * (200.0 / 99.0 + std::log(99.0) + 1.0), 1e-9);
  EXPECT_NEAR(ub.bound, 1523.1, 0.05);
  EXPECT_NEAR(ub.tail_prob, std::exp(-1.0), 1e-15);
}

TEST(UpperBound, MonotoneInTail) {
  const auto d = FlipDistribution::standard_bit_mutation(300, 1.0);
  auto prev = drift::upper_bound_b(d, 3.0, 0.5);
  for (double r = 1.0; r < 20.0; r += 0.5) {
    const auto cur = drift::upper_bound_b(d, 3.0, r);
    EXPECT_GT(cur.bound, prev.bound);
    EXPECT_LT(cur.tail_prob, prev.tail_prob);
    prev = cur;
  }
}

TEST(UpperBound, PolynomialWrapperExceedsNLogN) {
  const std::size_t n = 10000;
  const auto b = drift::polynomial_upper_bound(FlipDistribution::standard_bit_mutation(n, 1.0));
  EXPECT_TRUE(std::isfinite(b.bound));
  EXPECT_GT(b.bound, n * std::log(double(n)));
  EXPECT_THROW(drift::upper_bound_b(FlipDistribution::point_mass(n, 2), 2.0, 1.0), uea::Error);
}

TEST(CTilde, Examples) {
  EXPECT_DOUBLE_EQ(drift::c_tilde(1000, 9), 8.0);
  EXPECT_NEAR(drift::c_tilde(10000, 5000), 4078.97, 0.01);
  EXPECT_NEAR(drift::c_tilde(10000, 500), 415.17, 0.01);
  EXPECT_THROW(drift::c_tilde(10, 0), uea::Error);
}

TEST(VariableDrift, RlsAtThousand) {
  const auto prof = drift::variable_drift_lower_bound(FlipDistribution::point_mass(1000, 1));
  double harmonic = 0.0;
  for (int k = 1; k <= 20; ++k) harmonic += 1.0 / k;
  EXPECT_EQ(prof.d0, 20u);
  EXPECT_NEAR(prof.sum_inverse_h, 1000.0 * harmonic, 1e-9);
  EXPECT_NEAR(prof.headline, 6907.76, 0.01);
  EXPECT_LT(prof.corrected, prof.sum_inverse_h);
  EXPECT_FALSE(prof.degenerate);
}

TEST(VariableDrift, Degenerate) {
  const auto prof = drift::variable_drift_lower_bound(FlipDistribution::point_mass(50, 2));
  EXPECT_TRUE(prof.degenerate);
  EXPECT_EQ(prof.sum_inverse_h, 0.0);
}

TEST(Audit, ReportsFiniteValues) {
  const auto rep = drift::audit(FlipDistribution::standard_bit_mutation(200, 1.0));
  EXPECT_EQ(rep.n, 200u);
  EXPECT_TRUE(std::isfinite(rep.h_linear_ratio_max));
  EXPECT_GE(rep.c_tilde_prob_min, 0.0);
  EXPECT_LE(rep.c_tilde_prob_min, 1.0);
}

}  // namespace
