#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "uea/bitstring.hpp"
#include "uea/distributions.hpp"
#include "uea/error.hpp"
#include "uea/objectives.hpp"

// Exact drift of the distance potential d(x) = min(OM(x), n - OM(x)) and the
// closed-form runtime bounds built on it. Logarithms are natural; ln^2 n is
// (ln n)^2.
namespace uea::drift {

// Hypergeometric mass C(d,i) C(n-d,r-i) / C(n,r): the chance that r uniformly
// chosen positions hit exactly i of the d marked ones. Zero outside the
// support.
inline double hypergeom_pmf(std::size_t n, std::size_t r, std::size_t d, std::size_t i) {
  if (r > n || d > n) throw Error(ErrorCode::OutOfRange, "hypergeometric parameters exceed population");
  if (i > d || i > r || r - i > n - d) return 0.0;

  // C(r,i) * [d]_i [n-d]_{r-i} / [n]_r, multiplying factors >= 1 (from C(r,i))
  // and factors <= 1 (falling-factorial ratios) alternately to keep the
  // running product near 1.
  const std::size_t small_count = r;
  const std::size_t c = std::min(i, r - i);
  auto small = [&](std::size_t s) {
    if (s < i) return static_cast<double>(d - s) / static_cast<double>(n - s);
    const std::size_t j = s - i;
    return static_cast<double>(n - d - j) / static_cast<double>(n - i - j);
  };
  auto big = [&](std::size_t b) {
    return static_cast<double>(r - c + b + 1) / static_cast<double>(b + 1);
  };
  double value = 1.0;
  std::size_t s = 0;
  std::size_t b = 0;
  while (s < small_count || b < c) {
    if (b < c && (value < 1.0 || s == small_count)) {
      value *= big(b++);
    } else {
      value *= small(s++);
    }
  }
  return value;
}

namespace detail {

// Sum over i in [lo, hi] of weight(i) * hypergeom(n, r, d, i), walking out
// from the mode with the pmf ratio recurrence.
template <class Weight>
double hypergeom_weighted_sum(std::size_t n, std::size_t r, std::size_t d, std::int64_t lo,
                              std::int64_t hi, Weight weight) {
  if (lo > hi) return 0.0;
  const auto mode = static_cast<std::int64_t>(((r + 1) * (d + 1)) / (n + 2));
  const std::int64_t start = std::clamp(mode, lo, hi);
  const double p_start = hypergeom_pmf(n, r, d, static_cast<std::size_t>(start));

  const double nn = static_cast<double>(n), rr = static_cast<double>(r), dd = static_cast<double>(d);
  double total = weight(start) * p_start;
  double p = p_start;
  for (std::int64_t i = start; i < hi; ++i) {
    const double di = static_cast<double>(i);
    p *= (dd - di) * (rr - di) / ((di + 1.0) * (nn - dd - rr + di + 1.0));
    total += weight(i + 1) * p;
  }
  p = p_start;
  for (std::int64_t i = start; i > lo; --i) {
    const double di = static_cast<double>(i);
    p *= di * (nn - dd - rr + di) / ((dd - di + 1.0) * (rr - di + 1.0));
    total += weight(i - 1) * p;
  }
  return total;
}

}  // namespace detail

// All masses hypergeom(n, r, d, i) for i in [0, min(d, r)], zero off support.
inline std::vector<double> hypergeom_row(std::size_t n, std::size_t r, std::size_t d) {
  if (r > n || d > n) throw Error(ErrorCode::OutOfRange, "hypergeometric parameters exceed population");
  const std::size_t top = std::min(d, r);
  std::vector<double> row(top + 1, 0.0);
  const auto lo = static_cast<std::int64_t>(r + d > n ? r + d - n : 0);
  const auto mode = static_cast<std::int64_t>(((r + 1) * (d + 1)) / (n + 2));
  const std::int64_t start = std::clamp(mode, lo, static_cast<std::int64_t>(top));
  const double nn = static_cast<double>(n), rr = static_cast<double>(r), dd = static_cast<double>(d);
  double p = hypergeom_pmf(n, r, d, static_cast<std::size_t>(start));
  row[static_cast<std::size_t>(start)] = p;
  for (std::int64_t i = start; i < static_cast<std::int64_t>(top); ++i) {
    const double di = static_cast<double>(i);
    p *= (dd - di) * (rr - di) / ((di + 1.0) * (nn - dd - rr + di + 1.0));
    row[static_cast<std::size_t>(i + 1)] = p;
  }
  p = row[static_cast<std::size_t>(start)];
  for (std::int64_t i = start; i > lo; --i) {
    const double di = static_cast<double>(i);
    p *= di * (nn - dd - rr + di) / ((dd - di + 1.0) * (rr - di + 1.0));
    row[static_cast<std::size_t>(i - 1)] = p;
  }
  return row;
}

// Expected decrease of OM below d when flipping r random bits of a point with
// OM = d: sum over i of (2i - r) * hypergeom(n, r, d, i), i > r/2.
inline double B(std::size_t n, std::size_t d, std::size_t r) {
  if (r < 1 || r > n || d > n) throw Error(ErrorCode::OutOfRange, "need 1 <= r <= n and d <= n");
  const auto ri = static_cast<std::int64_t>(r);
  const auto di = static_cast<std::int64_t>(d);
  const std::int64_t lo = std::max<std::int64_t>((ri + 1) / 2, ri + di - static_cast<std::int64_t>(n));
  const std::int64_t hi = std::min(di, ri);
  return detail::hypergeom_weighted_sum(n, r, d, lo, hi,
                                        [ri](std::int64_t i) { return static_cast<double>(2 * i - ri); });
}

// Indices r in [1, n-1] whose coefficient p_r + p_{n-r} is non-zero.
inline std::vector<std::size_t> symmetric_support(const FlipDistribution& dist) {
  const std::size_t n = dist.n();
  std::vector<std::size_t> rs;
  for (std::size_t s : dist.support()) {
    if (s >= 1 && s <= n - 1) {
      rs.push_back(s);
      rs.push_back(n - s);
    }
  }
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  return rs;
}

// h~(d) with a caller-supplied progress function in place of B.
template <class ProgressFn>
double h_tilde_with(const FlipDistribution& dist, std::size_t d, ProgressFn progress) {
  const std::size_t n = dist.n();
  if (d > n / 2) throw Error(ErrorCode::OutOfRange, "distance exceeds floor(n/2)");
  double total = 0.0;
  for (std::size_t r : symmetric_support(dist)) {
    total += (dist.p(r) + dist.p(n - r)) * progress(n, d, r);
  }
  return total;
}

// h~(d) = sum_{r=1}^{n-1} (p_r + p_{n-r}) B(n, d, r): the exact one-step drift
// of the best-so-far distance from a parent at distance d.
inline double h_tilde(const FlipDistribution& dist, std::size_t d) {
  const std::size_t n = dist.n();
  if (d > n / 2) throw Error(ErrorCode::OutOfRange, "distance exceeds floor(n/2)");
  double total = 0.0;
  for (std::size_t r : symmetric_support(dist)) {
    if (r > 2 * d) break;  // B(n, d, r) = 0 once ceil(r/2) > d
    total += (dist.p(r) + dist.p(n - r)) * B(n, d, r);
  }
  return total;
}

inline double p1_plus_pn1(const FlipDistribution& dist) {
  const std::size_t n = dist.n();
  return n >= 1 ? dist.p(1) + dist.p(n - 1) : 0.0;
}

// d_0 = floor((p_1 + p_{n-1}) n / ln^2 n).
inline std::size_t d0(const FlipDistribution& dist) {
  const std::size_t n = dist.n();
  if (n < 2) throw Error(ErrorCode::OutOfRange, "d0 needs n >= 2");
  const double ln = std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::floor(p1_plus_pn1(dist) * static_cast<double>(n) / (ln * ln)));
}

struct DriftRow {
  std::size_t d = 0;
  double h_tilde = 0.0;
  double h = 0.0;
};

struct DriftTable {
  std::size_t n = 0;
  std::size_t d0 = 0;
  std::vector<DriftRow> rows;  // rows[d].d == d
};

// h(d) = h~(d) for d <= d0, n above. Rows cover d in [0, d_max], d_max
// defaulting to floor(n/2).
inline DriftTable drift_table(const FlipDistribution& dist, std::optional<std::size_t> d_max = std::nullopt) {
  const std::size_t n = dist.n();
  if (n < 2) throw Error(ErrorCode::OutOfRange, "drift table needs n >= 2");
  DriftTable table;
  table.n = n;
  table.d0 = d0(dist);
  const std::size_t last = std::min(d_max.value_or(n / 2), n / 2);
  table.rows.reserve(last + 1);
  for (std::size_t d = 0; d <= last; ++d) {
    const double ht = h_tilde(dist, d);
    table.rows.push_back({d, ht, d <= table.d0 ? ht : static_cast<double>(n)});
  }
  return table;
}

struct PotentialWeights {
  std::size_t n = 0;
  double alpha = 0.0;
  double chi = 0.0;
  double p1 = 0.0;
  std::vector<double> gamma;  // gamma[i-1] = gamma_i
  std::vector<double> g;      // g[i-1] = g_i
};

namespace detail {

// ratio(i) = w_i / w_{i-1} for 0-based i >= 1.
template <class Ratio>
PotentialWeights make_potential_weights(const FlipDistribution& dist, double alpha, Ratio ratio) {
  const std::size_t n = dist.n();
  if (!(dist.p(1) > 0.0)) throw Error(ErrorCode::ZeroP1, "potential weights need p_1 > 0");
  if (!(alpha > 1.0)) throw Error(ErrorCode::NonPositiveAlphaMargin, "need alpha > 1");
  if (n < 2) throw Error(ErrorCode::OutOfRange, "potential weights need n >= 2");

  PotentialWeights pw;
  pw.n = n;
  pw.alpha = alpha;
  pw.chi = dist.mean();
  pw.p1 = dist.p(1);
  const double base = 1.0 + alpha * std::pow(pw.chi, 3) / (static_cast<double>(n - 1) * pw.p1 * pw.p1);
  pw.gamma.resize(n);
  pw.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) pw.gamma[i] = std::pow(base, static_cast<double>(i));
  pw.g[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) pw.g[i] = std::min(pw.gamma[i], pw.g[i - 1] * ratio(i));
  return pw;
}

}  // namespace detail

// gamma_i = (1 + alpha chi^3 / ((n-1) p_1^2))^(i-1);
// g_1 = 1, g_i = min(gamma_i, g_{i-1} w_i / w_{i-1}).
// `weights` are the ascending positive weights of the target linear function.
inline PotentialWeights potential_weights(const FlipDistribution& dist, double alpha,
                                          std::span<const double> weights) {
  if (weights.size() != dist.n()) throw Error(ErrorCode::LengthMismatch, "need one weight per position");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]) || (i > 0 && weights[i] < weights[i - 1])) {
      throw Error(ErrorCode::BadInput, "weights must be positive, finite and ascending");
    }
  }
  return detail::make_potential_weights(dist, alpha, [&](std::size_t i) { return weights[i] / weights[i - 1]; });
}

inline PotentialWeights potential_weights(const FlipDistribution& dist, double alpha, const Objective& f) {
  if (!f.is_linear() || f.kind() == ObjectiveKind::Anchored) {
    throw Error(ErrorCode::BadInput, "potential weights need a sorted linear objective");
  }
  if (f.n() != dist.n()) throw Error(ErrorCode::LengthMismatch, "objective n differs from distribution n");
  if (f.kind() == ObjectiveKind::BinVal) {
    return detail::make_potential_weights(dist, alpha, [](std::size_t) { return 2.0; });
  }
  return potential_weights(dist, alpha, f.weights());
}

// g(x) = sum g_i x_i.
inline double potential(const PotentialWeights& pw, const BitString& x) {
  if (x.size() != pw.n) throw Error(ErrorCode::LengthMismatch, "bit string length differs from n");
  double total = 0.0;
  for (std::size_t i = 0; i < pw.n; ++i) {
    if (x.test(i)) total += pw.g[i];
  }
  return total;
}

// g evaluated on the wrong bits of a maximization incumbent, i.e.
// potential(pw, complement(x)); zero exactly at the optimum 1^n.
inline double wrong_bit_potential(const PotentialWeights& pw, const BitString& x) {
  if (x.size() != pw.n) throw Error(ErrorCode::LengthMismatch, "bit string length differs from n");
  double total = 0.0;
  for (std::size_t i = 0; i < pw.n; ++i) {
    if (!x.test(i)) total += pw.g[i];
  }
  return total;
}

struct UpperBound {
  double bound = 0.0;
  double tail_prob = 0.0;  // Pr[T > bound] <= tail_prob
};

// b(r) = (n/p_1) (alpha/(alpha-1)) (alpha n chi^3/((n-1) p_1^2)
//        + ln((n-1) p_1^2/chi^3) + r); b(1) bounds the expectation.
inline UpperBound upper_bound_b(const FlipDistribution& dist, double alpha, double r) {
  const std::size_t n = dist.n();
  const double p1 = dist.p(1);
  if (!(p1 > 0.0)) throw Error(ErrorCode::ZeroP1, "upper bound needs p_1 > 0");
  if (!(alpha > 1.0)) throw Error(ErrorCode::NonPositiveAlphaMargin, "need alpha > 1");
  if (!(r > 0.0)) throw Error(ErrorCode::BadInput, "tail parameter must be > 0");
  if (n < 2) throw Error(ErrorCode::OutOfRange, "upper bound needs n >= 2");
  const double nn = static_cast<double>(n);
  const double chi3 = std::pow(dist.mean(), 3);
  const double scale = (nn / p1) * (alpha / (alpha - 1.0));
  const double inner = alpha * nn * chi3 / ((nn - 1.0) * p1 * p1) + std::log((nn - 1.0) * p1 * p1 / chi3) + r;
  return {scale * inner, std::exp(-r)};
}

// The alpha = 2 instance, O(n chi^3/p_1^3 + n ln n/p_1).
inline UpperBound polynomial_upper_bound(const FlipDistribution& dist, double r = 1.0) {
  return upper_bound_b(dist, 2.0, r);
}

// (ln n + 1) n / p_1, the OneMax bound from single-bit flips alone.
inline double onemax_upper_bound(const FlipDistribution& dist) {
  const double p1 = dist.p(1);
  if (!(p1 > 0.0)) throw Error(ErrorCode::ZeroP1, "upper bound needs p_1 > 0");
  const double nn = static_cast<double>(dist.n());
  return (std::log(nn) + 1.0) * nn / p1;
}

// chi^3 p_1^-2 (1 - p_0)^-1; the tight upper bound applies while this is
// o(ln n / ln ln n).
inline double upper_bound_condition(const FlipDistribution& dist) {
  const double p1 = dist.p(1);
  if (!(p1 > 0.0)) throw Error(ErrorCode::ZeroP1, "condition needs p_1 > 0");
  return std::pow(dist.mean(), 3) / (p1 * p1 * (1.0 - dist.p(0)));
}

// Lower envelope for the next best-so-far distance from distance i:
// i - sqrt(n) ln n (i >= n/6), i - ln^2 n (n^{1/3} <= i < n/6), i - 1 below.
inline double c_tilde(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) throw Error(ErrorCode::OutOfRange, "need 1 <= i <= n");
  const double nn = static_cast<double>(n);
  const double ii = static_cast<double>(i);
  const double ln = std::log(nn);
  if (ii >= nn / 6.0) return ii - std::sqrt(nn) * ln;
  if (ii >= std::cbrt(nn)) return ii - ln * ln;
  return ii - 1.0;
}

struct VariableDriftProfile {
  std::size_t n = 0;
  std::size_t d0 = 0;
  double sum_inverse_h = 0.0;  // sum_{d=1}^{d0} 1/h(d)
  double headline = 0.0;       // n ln n / (p_1 + p_{n-1})
  double failure_p = 0.0;      // n^{-4/3} ln^7 n
  double corrected = 0.0;      // sum - sum^2 p / (1 + sum p)
  bool degenerate = false;     // p_1 + p_{n-1} = 0
};

// Variable-drift lower bound for the time to reach distance 0. The cutoff d0
// is capped at floor(n/2) where h~ is defined (only binding for n < 8).
inline VariableDriftProfile variable_drift_lower_bound(const FlipDistribution& dist) {
  const std::size_t n = dist.n();
  if (n < 2) throw Error(ErrorCode::OutOfRange, "lower bound needs n >= 2");
  VariableDriftProfile prof;
  prof.n = n;
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  prof.failure_p = std::pow(nn, -4.0 / 3.0) * std::pow(ln, 7);
  const double q = p1_plus_pn1(dist);
  if (!(q > 0.0)) {
    prof.degenerate = true;
    prof.headline = std::numeric_limits<double>::infinity();
    return prof;
  }
  prof.headline = nn * ln / q;
  prof.d0 = std::min(d0(dist), n / 2);
  for (std::size_t d = 1; d <= prof.d0; ++d) prof.sum_inverse_h += 1.0 / h_tilde(dist, d);
  const double s = prof.sum_inverse_h;
  prof.corrected = s - s * s * prof.failure_p / (1.0 + s * prof.failure_p);
  return prof;
}

// Drift of the best-so-far distance when the parent sits at distance
// d + delta while the best distance seen is d (the h_d(d + delta) quantity).
inline double h_offset(const FlipDistribution& dist, std::size_t d, std::size_t delta) {
  const std::size_t n = dist.n();
  const std::size_t parent = d + delta;
  if (parent > n / 2) throw Error(ErrorCode::OutOfRange, "parent distance exceeds floor(n/2)");
  const auto dl = static_cast<std::int64_t>(delta);
  const auto pa = static_cast<std::int64_t>(parent);
  double total = 0.0;
  for (std::size_t r : symmetric_support(dist)) {
    if (r < delta + 1 || r + delta + 1 > n) continue;
    const auto ri = static_cast<std::int64_t>(r);
    const std::int64_t lo = std::max<std::int64_t>((ri + dl + 1) / 2, ri + pa - static_cast<std::int64_t>(n));
    const std::int64_t hi = std::min(pa, ri);
    const double bd = detail::hypergeom_weighted_sum(
        n, r, parent, lo, hi, [ri, dl](std::int64_t i) { return static_cast<double>(2 * i - ri - dl); });
    total += (dist.p(r) + dist.p(n - r)) * bd;
  }
  return total;
}

// Finite-n left/right sides of the asymptotic lemmas behind the lower bound.
// The lemmas only claim these inequalities beyond a (huge) n_0, so nothing
// here is asserted.
struct AuditReport {
  std::size_t n = 0;
  std::size_t d0 = 0;
  // max over d <= d0, r >= 12 of B(n,d,r) / (d/n)^2; claim: < 1.
  double b_tail_ratio_max = 0.0;
  // max over d <= d0 of h(d) / ((1 + 1/ln n)(p_1 + p_{n-1}) d/n); claim: <= 1.
  double h_linear_ratio_max = 0.0;
  // max over d <= d0, delta >= 1 of h_d(d+delta) / h(d); claim: <= 1.
  double h_offset_ratio_max = 0.0;
  // min over parent distance i and r in the support of
  // Pr[d(flip_r(x)) >= c~(i)]; claim: >= 1 - n^{-4/3} ln^7 n.
  double c_tilde_prob_min = 1.0;
  double c_tilde_target = 0.0;
  // h non-decreasing on [1, d0 + 1].
  bool h_monotone = true;
};

inline AuditReport audit(const FlipDistribution& dist) {
  const std::size_t n = dist.n();
  if (n < 2) throw Error(ErrorCode::OutOfRange, "audit needs n >= 2");
  AuditReport rep;
  rep.n = n;
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  rep.d0 = std::min(d0(dist), n / 2);
  const double q = p1_plus_pn1(dist);
  rep.c_tilde_target = 1.0 - std::pow(nn, -4.0 / 3.0) * std::pow(ln, 7);

  std::vector<double> h(rep.d0 + 1, 0.0);
  for (std::size_t d = 1; d <= rep.d0; ++d) h[d] = h_tilde(dist, d);

  for (std::size_t d = 1; d <= rep.d0; ++d) {
    const double frac = static_cast<double>(d) / nn;
    for (std::size_t r = 12; r <= std::min(n, 2 * d); ++r) {
      rep.b_tail_ratio_max = std::max(rep.b_tail_ratio_max, B(n, d, r) / (frac * frac));
    }
    if (q > 0.0) {
      rep.h_linear_ratio_max = std::max(rep.h_linear_ratio_max, h[d] / ((1.0 + 1.0 / ln) * q * frac));
    }
    for (std::size_t delta = 1; d + delta <= n / 2; ++delta) {
      rep.h_offset_ratio_max = std::max(rep.h_offset_ratio_max, h_offset(dist, d, delta) / h[d]);
    }
  }
  for (std::size_t d = 1; d + 1 <= rep.d0 + 1 && d + 1 <= n / 2; ++d) {
    const double next = d + 1 <= rep.d0 ? h[d + 1] : nn;
    if (next < h[d]) rep.h_monotone = false;
  }

  std::vector<std::size_t> rs = symmetric_support(dist);
  rs.push_back(0);
  rs.push_back(n);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    const double floor_dist = c_tilde(n, i);
    for (std::size_t r : rs) {
      // Parent with OM = i; flipping j of its ones gives OM = i + r - 2j.
      const auto lo = static_cast<std::int64_t>(r > n - i ? r - (n - i) : 0);
      const auto hi = static_cast<std::int64_t>(std::min(i, r));
      double prob = 0.0;
      for (std::int64_t j = lo; j <= hi; ++j) {
        const auto om = static_cast<std::int64_t>(i + r) - 2 * j;
        const double dist_y = static_cast<double>(std::min<std::int64_t>(om, static_cast<std::int64_t>(n) - om));
        if (dist_y >= floor_dist) prob += hypergeom_pmf(n, r, i, static_cast<std::size_t>(j));
      }
      rep.c_tilde_prob_min = std::min(rep.c_tilde_prob_min, prob);
    }
  }
  return rep;
}

}  // namespace uea::drift
