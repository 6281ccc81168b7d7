#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "uea/error.hpp"

namespace uea::stats {

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(m)
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

inline Summary summarize(std::span<const double> samples) {
  const std::size_t m = samples.size();
  if (m < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 samples");
  // Two-pass with the sum taken in sorted order so the result does not depend
  // on sample order.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m));
  return {mean, se, mean - kZ95 * se, mean + kZ95 * se};
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Two-sample KS statistic sup |F_a - F_b|, evaluated after each distinct
// value so tied observations step together. p-value from the asymptotic
// Kolmogorov law with the usual effective size correction.
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "both samples must be non-empty");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

struct LeadingConstantFit {
  std::vector<double> ratios;  // mean_T p_1 / (n ln n), in input order
  bool converging = true;      // |ratio - 1| non-increasing in n
};

struct SizedMean {
  double n = 0.0;
  double mean = 0.0;
  double p1 = 0.0;  // per-point p_1; 0 uses the common value
};

inline LeadingConstantFit leading_constant_fit(std::span<const SizedMean> points, double p1) {
  if (!(p1 > 0.0) || p1 > 1.0) throw Error(ErrorCode::BadInput, "p1 must lie in (0, 1]");
  LeadingConstantFit fit;
  for (const auto& pt : points) {
    if (!(pt.n >= 3.0) || !(pt.mean > 0.0)) throw Error(ErrorCode::BadInput, "need n >= 3 and positive means");
    const double q = pt.p1 > 0.0 ? pt.p1 : p1;
    if (q > 1.0) throw Error(ErrorCode::BadInput, "p1 must lie in (0, 1]");
    fit.ratios.push_back(pt.mean * q / (pt.n * std::log(pt.n)));
  }
  std::vector<std::size_t> order(points.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return points[l].n < points[r].n; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (std::abs(fit.ratios[order[k]] - 1.0) > std::abs(fit.ratios[order[k - 1]] - 1.0)) fit.converging = false;
  }
  return fit;
}

}  // namespace uea::stats
