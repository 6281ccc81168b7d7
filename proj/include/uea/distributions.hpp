#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "uea/error.hpp"
#include "uea/rng.hpp"

namespace uea {

enum class DistributionKind { Point, StandardBitMutation, PowerLaw, Custom };

inline const char* to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Point: return "point";
    case DistributionKind::StandardBitMutation: return "sbm";
    case DistributionKind::PowerLaw: return "power_law";
    case DistributionKind::Custom: return "custom";
  }
  return "custom";
}

// A flip-number distribution D = (p_0, ..., p_n) on [0, n]. The mutation
// operator draws k ~ D and flips a uniformly random k-subset of positions.
// Immutable after construction, so one instance may be shared by any number
// of trial workers.
class FlipDistribution {
 public:
  static constexpr double kInputTolerance = 1e-9;

  static FlipDistribution custom(std::size_t n, std::vector<double> probs) {
    if (probs.size() != n + 1) {
      throw Error(ErrorCode::LengthMismatch,
                  "expected " + std::to_string(n + 1) + " probabilities, got " +
                      std::to_string(probs.size()));
    }
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::NegativeProbability, "probabilities must be finite and >= 0");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kInputTolerance) {
      throw Error(ErrorCode::SumOutOfTolerance, "probabilities sum to " + std::to_string(sum));
    }
    return FlipDistribution(n, std::move(probs), DistributionKind::Custom, 0.0);
  }

  static FlipDistribution point_mass(std::size_t n, std::size_t k) {
    if (k > n) throw Error(ErrorCode::OutOfRange, "point mass index exceeds n");
    std::vector<double> probs(n + 1, 0.0);
    probs[k] = 1.0;
    return FlipDistribution(n, std::move(probs), DistributionKind::Point, static_cast<double>(k));
  }

  // Flip count of standard bit mutation with rate c/n, i.e. Binomial(n, c/n).
  static FlipDistribution standard_bit_mutation(std::size_t n, double c) {
    if (n == 0 || !(c > 0.0) || c > static_cast<double>(n)) {
      throw Error(ErrorCode::RateOutOfRange, "need 0 < c <= n");
    }
    const double q = c / static_cast<double>(n);
    std::vector<double> probs(n + 1, 0.0);
    if (q >= 1.0) {
      probs[n] = 1.0;
    } else {
      // Evaluate at the mode, then walk outwards with the pmf ratio
      // p_{k+1}/p_k = (n-k)/(k+1) * q/(1-q). Normalization removes the
      // (small) error of the anchor value.
      const auto mode = static_cast<std::size_t>(std::floor((static_cast<double>(n) + 1.0) * q));
      const std::size_t m = std::min(mode, n);
      const double nn = static_cast<double>(n);
      const double md = static_cast<double>(m);
      probs[m] = std::exp(std::lgamma(nn + 1) - std::lgamma(md + 1) - std::lgamma(nn - md + 1) +
                          md * std::log(q) + (nn - md) * std::log1p(-q));
      const double odds = q / (1.0 - q);
      for (std::size_t k = m; k < n; ++k) {
        probs[k + 1] = probs[k] * static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
      }
      for (std::size_t k = m; k > 0; --k) {
        probs[k - 1] = probs[k] * static_cast<double>(k) / static_cast<double>(n - k + 1) / odds;
      }
    }
    return FlipDistribution(n, std::move(probs), DistributionKind::StandardBitMutation, c);
  }

  // Heavy-tailed flip count: p_k proportional to k^-beta on [1, floor(n/2)].
  static FlipDistribution power_law(std::size_t n, double beta) {
    if (!(beta > 1.0) || !std::isfinite(beta)) throw Error(ErrorCode::BetaOutOfRange, "need beta > 1");
    if (n < 2) throw Error(ErrorCode::OutOfRange, "power law needs n >= 2");
    std::vector<double> probs(n + 1, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) probs[k] = std::pow(static_cast<double>(k), -beta);
    return FlipDistribution(n, std::move(probs), DistributionKind::PowerLaw, beta);
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double p(std::size_t k) const noexcept { return k <= n_ ? probs_[k] : 0.0; }
  double mean() const noexcept { return chi_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  // Indices k with p_k > 0, ascending.
  const std::vector<std::size_t>& support() const noexcept { return support_; }

  DistributionKind kind() const noexcept { return kind_; }
  // c for sbm, beta for power_law, k for point; 0 for custom.
  double parameter() const noexcept { return parameter_; }

  // D conditioned on drawing a non-zero flip count.
  FlipDistribution condition_nonzero() const {
    const double keep = 1.0 - probs_[0];
    if (!(keep > 0.0)) throw Error(ErrorCode::DegenerateAllZero, "p_0 = 1");
    if (probs_[0] == 0.0) return *this;
    std::vector<double> probs(probs_);
    probs[0] = 0.0;
    for (std::size_t k = 1; k <= n_; ++k) probs[k] /= keep;
    return FlipDistribution(n_, std::move(probs), DistributionKind::Custom, 0.0);
  }

  // Inverse-CDF draw by binary search over the cumulative table.
  std::size_t sample(Rng& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  FlipDistribution(std::size_t n, std::vector<double> probs, DistributionKind kind, double parameter)
      : n_(n), probs_(std::move(probs)), kind_(kind), parameter_(parameter) {
    double sum = 0.0;
    for (double p : probs_) sum += p;
    for (double& p : probs_) p /= sum;

    cumulative_.resize(n_ + 1);
    double acc = 0.0;
    std::size_t last = 0;
    chi_ = 0.0;
    for (std::size_t k = 0; k <= n_; ++k) {
      acc += probs_[k];
      cumulative_[k] = std::min(acc, 1.0);
      chi_ += static_cast<double>(k) * probs_[k];
      if (probs_[k] > 0.0) {
        last = k;
        support_.push_back(k);
      }
    }
    for (std::size_t k = last; k <= n_; ++k) cumulative_[k] = 1.0;
  }

  std::size_t n_ = 0;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  std::vector<std::size_t> support_;
  double chi_ = 0.0;
  DistributionKind kind_ = DistributionKind::Custom;
  double parameter_ = 0.0;
};

inline double mean(const FlipDistribution& d) noexcept { return d.mean(); }

}  // namespace uea
