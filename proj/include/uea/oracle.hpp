#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "uea/bitstring.hpp"
#include "uea/distributions.hpp"
#include "uea/drift.hpp"
#include "uea/error.hpp"
#include "uea/objectives.hpp"

// Exact ground truth for small instances: expected hitting times of the
// elitist (1+1) EA as absorbing Markov chains, and one-step drifts by
// exhaustive enumeration of flip sets.
namespace uea::oracle {

enum class StateSpace { OneMaxLevel, ParityLevel, AnchoredCompressed, Full };

inline const char* to_string(StateSpace s) {
  switch (s) {
    case StateSpace::OneMaxLevel: return "onemax-level";
    case StateSpace::ParityLevel: return "parity-level";
    case StateSpace::AnchoredCompressed: return "anchored-compressed";
    case StateSpace::Full: return "full";
  }
  return "unknown";
}

inline constexpr std::size_t kMaxLevelN = 10'000;
inline constexpr std::size_t kMaxFullN = 16;
inline constexpr std::size_t kMaxEnumerationN = 14;
inline constexpr std::size_t kDenseGroupLimit = 2048;
inline constexpr double kGaussSeidelTolerance = 1e-12;

// Expected iterations to absorption from every state. States from which the
// optimum is missed with positive probability hold +inf.
class ChainSolution {
 public:
  ChainSolution() = default;
  ChainSolution(StateSpace space, std::size_t n, std::vector<double> expected, std::vector<char> absorbing)
      : space_(space), n_(n), expected_(std::move(expected)), absorbing_(std::move(absorbing)) {}

  StateSpace space() const noexcept { return space_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return expected_.size(); }
  const std::vector<double>& expected_time() const noexcept { return expected_; }
  bool is_absorbing(std::size_t s) const { return absorbing_.at(s) != 0; }
  bool reaches_optimum(std::size_t s) const { return std::isfinite(expected_.at(s)); }

  double time_from(std::size_t s) const {
    if (s >= expected_.size()) throw Error(ErrorCode::OutOfRange, "state index out of range");
    if (!std::isfinite(expected_[s])) {
      throw Error(ErrorCode::UnreachableOptimum, "optimum is not reached with probability 1 from this state");
    }
    return expected_[s];
  }

  // sum_s w_s E[T | s]; states with zero weight may be unreachable.
  double mixture(std::span<const double> weights) const {
    if (weights.size() != expected_.size()) throw Error(ErrorCode::LengthMismatch, "one weight per state");
    double total = 0.0;
    for (std::size_t s = 0; s < weights.size(); ++s) {
      if (weights[s] == 0.0) continue;
      total += weights[s] * time_from(s);
    }
    return total;
  }

  // Start sampled uniformly from {0,1}^n.
  double uniform_start() const { return mixture(uniform_weights()); }

  // Start with a uniformly random set of `dist` wrong bits.
  double distance_start(std::size_t dist) const { return mixture(distance_weights(dist)); }

  std::vector<double> uniform_weights() const;
  std::vector<double> distance_weights(std::size_t dist) const;

 private:
  StateSpace space_ = StateSpace::OneMaxLevel;
  std::size_t n_ = 0;
  std::vector<double> expected_;
  std::vector<char> absorbing_;
};

// State index of the compressed anchored chain: b = anchor bit, m = ones
// among the other n-1 positions.
inline std::size_t anchored_state(std::size_t n, bool b, std::size_t m) { return (b ? n : 0) + m; }

namespace detail {

// Binomial(n, 1/2) masses.
inline std::vector<double> half_binomial(std::size_t n) {
  if (n == 0) return {1.0};
  // Binomial(n, c/n) with c = n/2.
  return FlipDistribution::standard_bit_mutation(n, static_cast<double>(n) / 2.0).probs();
}

// Solves E = 1 + P E on non-absorbing states for an elitist chain: every
// transition goes to a state of greater or equal fitness. `transitions(s,
// emit)` calls emit(t, p) for each accepted move s -> t with t != s
// (duplicates allowed); the remaining mass is a self-loop. States are solved
// in order of decreasing fitness, one block of equal fitness at a time.
template <class Transitions>
std::vector<double> solve_elitist(const std::vector<double>& fitness, const std::vector<char>& absorbing,
                                  Transitions&& transitions) {
  const std::size_t size = fitness.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> value(size, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  for (std::size_t s = 0; s < size; ++s) {
    if (absorbing[s]) value[s] = 0.0;
  }

  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(size, npos);
  std::size_t begin = 0;
  while (begin < size) {
    std::size_t end = begin;
    while (end < size && fitness[order[end]] == fitness[order[begin]]) ++end;

    std::vector<std::size_t> group;
    for (std::size_t k = begin; k < end; ++k) {
      if (!absorbing[order[k]]) {
        local[order[k]] = group.size();
        group.push_back(order[k]);
      }
    }
    const std::size_t g = group.size();
    std::vector<double> rhs(g, 1.0), q(g, 0.0);
    std::vector<char> bad(g, 0), exit(g, 0);
    std::vector<std::vector<std::pair<std::size_t, double>>> edges(g);
    for (std::size_t a = 0; a < g; ++a) {
      transitions(group[a], [&](std::size_t t, double p) {
        if (!(p > 0.0)) return;
        q[a] += p;
        if (local[t] != npos) {
          edges[a].emplace_back(local[t], p);
          return;
        }
        const double v = value[t];
        if (std::isnan(v)) throw Error(ErrorCode::BadInput, "transition to a state of lower fitness");
        if (std::isinf(v)) {
          bad[a] = 1;
        } else {
          rhs[a] += p * v;
          exit[a] = 1;
        }
      });
    }

    // Infinite: can reach a bad state, or cannot reach any exit.
    std::vector<std::vector<std::size_t>> reverse(g);
    for (std::size_t a = 0; a < g; ++a) {
      for (auto [b, p] : edges[a]) reverse[b].push_back(a);
    }
    auto backward = [&](std::vector<char> seed) {
      std::vector<std::size_t> stack;
      for (std::size_t a = 0; a < g; ++a) {
        if (seed[a]) stack.push_back(a);
      }
      while (!stack.empty()) {
        const std::size_t b = stack.back();
        stack.pop_back();
        for (std::size_t a : reverse[b]) {
          if (!seed[a]) {
            seed[a] = 1;
            stack.push_back(a);
          }
        }
      }
      return seed;
    };
    const std::vector<char> reach_exit = backward(exit);
    for (std::size_t a = 0; a < g; ++a) {
      if (!reach_exit[a]) bad[a] = 1;
    }
    bad = backward(bad);

    std::vector<std::size_t> good;
    std::vector<std::size_t> pos(g, npos);
    for (std::size_t a = 0; a < g; ++a) {
      if (bad[a]) {
        value[group[a]] = inf;
      } else {
        pos[a] = good.size();
        good.push_back(a);
      }
    }
    const std::size_t m = good.size();
    if (m == 1 && edges[good[0]].empty()) {
      value[group[good[0]]] = rhs[good[0]] / q[good[0]];
    } else if (m > 0 && m <= kDenseGroupLimit) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      Eigen::VectorXd b(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = good[i];
        const auto ii = static_cast<Eigen::Index>(i);
        A(ii, ii) += q[a];
        b(ii) = rhs[a];
        for (auto [c, p] : edges[a]) A(ii, static_cast<Eigen::Index>(pos[c])) -= p;
      }
      const Eigen::VectorXd x = A.partialPivLu().solve(b);
      for (std::size_t i = 0; i < m; ++i) value[group[good[i]]] = x(static_cast<Eigen::Index>(i));
    } else if (m > 0) {
      std::vector<double> x(m);
      for (std::size_t i = 0; i < m; ++i) x[i] = rhs[good[i]] / q[good[i]];
      for (;;) {
        double residual = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const std::size_t a = good[i];
          double acc = rhs[a];
          for (auto [c, p] : edges[a]) acc += p * x[pos[c]];
          const double next = acc / q[a];
          residual = std::max(residual, std::abs(next - x[i]));
          scale = std::max(scale, std::abs(next));
          x[i] = next;
        }
        if (residual <= kGaussSeidelTolerance * std::max(scale, 1.0)) break;
      }
      for (std::size_t i = 0; i < m; ++i) value[group[good[i]]] = x[i];
    }

    for (std::size_t a : group) local[a] = npos;
    begin = end;
  }
  return value;
}

// Calls visit(mask) for every n-bit mask with exactly h ones.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t h, Visit&& visit) {
  if (h > n) return;
  if (h == 0) {
    visit(std::uint64_t{0});
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t s = (std::uint64_t{1} << h) - 1;
  while (s < limit) {
    visit(s);
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double v = 1.0;
  for (std::size_t j = 1; j <= k; ++j) v = v * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(v);
}

}  // namespace detail

inline std::vector<double> ChainSolution::uniform_weights() const {
  std::vector<double> w(expected_.size(), 0.0);
  switch (space_) {
    case StateSpace::OneMaxLevel:
    case StateSpace::ParityLevel:
      w = detail::half_binomial(n_);
      break;
    case StateSpace::AnchoredCompressed: {
      const auto rest = detail::half_binomial(n_ - 1);
      for (std::size_t m = 0; m < n_; ++m) {
        w[anchored_state(n_, false, m)] = 0.5 * rest[m];
        w[anchored_state(n_, true, m)] = 0.5 * rest[m];
      }
      break;
    }
    case StateSpace::Full:
      std::fill(w.begin(), w.end(), std::ldexp(1.0, -static_cast<int>(n_)));
      break;
  }
  return w;
}

inline std::vector<double> ChainSolution::distance_weights(std::size_t dist) const {
  if (dist > n_) throw Error(ErrorCode::OutOfRange, "distance exceeds n");
  std::vector<double> w(expected_.size(), 0.0);
  switch (space_) {
    case StateSpace::OneMaxLevel:
    case StateSpace::ParityLevel:
      w[n_ - dist] = 1.0;
      break;
    case StateSpace::AnchoredCompressed: {
      // The anchor is among the wrong bits with probability dist/n.
      const double anchor_wrong = static_cast<double>(dist) / static_cast<double>(n_);
      if (dist >= 1) w[anchored_state(n_, false, n_ - dist)] += anchor_wrong;
      if (dist <= n_ - 1) w[anchored_state(n_, true, n_ - 1 - dist)] += 1.0 - anchor_wrong;
      break;
    }
    case StateSpace::Full: {
      const double each = 1.0 / detail::binomial(n_, dist);
      const std::uint64_t all = (std::uint64_t{1} << n_) - 1;
      detail::for_each_subset(n_, dist, [&](std::uint64_t wrong) { w[all ^ wrong] = each; });
      break;
    }
  }
  return w;
}

// (n+1)-state chain over OM levels for objectives whose fitness depends on
// OM(x) alone. A move from level m flips i of the m ones and r - i zeros.
inline ChainSolution level_chain(const Objective& f, const FlipDistribution& dist) {
  const std::size_t n = f.n();
  if (!f.is_level_symmetric()) throw Error(ErrorCode::BadInput, "level chain needs onemax or parity_swap");
  if (dist.n() != n) throw Error(ErrorCode::DimensionMismatch, "distribution n differs from objective n");
  if (n > kMaxLevelN) throw Error(ErrorCode::TooLarge, "level chain supports n <= 10000");

  std::vector<double> fitness(n + 1);
  std::vector<char> absorbing(n + 1);
  for (std::size_t m = 0; m <= n; ++m) {
    fitness[m] = f.value_at_level(m);
    absorbing[m] = f.is_optimal_level(m);
  }
  std::vector<std::size_t> flips;
  for (std::size_t r : dist.support()) {
    if (r >= 1) flips.push_back(r);
  }
  auto value = detail::solve_elitist(fitness, absorbing, [&](std::size_t m, auto&& emit) {
    for (std::size_t r : flips) {
      const double pr = dist.p(r);
      const auto row = drift::hypergeom_row(n, r, m);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == 0.0) continue;
        const std::size_t next = m + (r - i) - i;
        if (next != m && fitness[next] >= fitness[m]) emit(next, pr * row[i]);
      }
    }
  });
  const auto space = f.kind() == ObjectiveKind::ParitySwap ? StateSpace::ParityLevel : StateSpace::OneMaxLevel;
  return ChainSolution(space, n, std::move(value), std::move(absorbing));
}

// Chain over all 2^n points; state index is BitString::to_index.
inline ChainSolution full_chain(const Objective& f, const FlipDistribution& dist) {
  const std::size_t n = f.n();
  if (dist.n() != n) throw Error(ErrorCode::DimensionMismatch, "distribution n differs from objective n");
  if (n > kMaxFullN) throw Error(ErrorCode::TooLarge, "full chain supports n <= 16");

  const std::size_t size = std::size_t{1} << n;
  std::vector<double> fitness(size);
  std::vector<char> absorbing(size);
  for (std::size_t s = 0; s < size; ++s) {
    const BitString x = BitString::from_index(n, s);
    fitness[s] = f.evaluate(x);
    absorbing[s] = f.is_optimal(x);
  }
  std::vector<std::pair<std::size_t, double>> per_set;  // (h, p_h / C(n,h))
  for (std::size_t h : dist.support()) {
    if (h >= 1) per_set.emplace_back(h, dist.p(h) / detail::binomial(n, h));
  }
  auto value = detail::solve_elitist(fitness, absorbing, [&](std::size_t s, auto&& emit) {
    for (auto [h, p] : per_set) {
      detail::for_each_subset(n, h, [&](std::uint64_t flip) {
        const std::size_t t = s ^ static_cast<std::size_t>(flip);
        if (fitness[t] >= fitness[s]) emit(t, p);
      });
    }
  });
  return ChainSolution(StateSpace::Full, n, std::move(value), std::move(absorbing));
}

// Chain for anchor_weight * x_1 + sum_{i>=2} x_i over states (b, m). Position
// 1 is among r flipped positions with probability r/n; the rest of the flip
// set is hypergeometric over the other n-1 positions.
inline ChainSolution compressed_anchored_chain(double anchor_weight, std::size_t n, const FlipDistribution& dist) {
  const Objective f = Objective::anchored(n, anchor_weight);
  if (dist.n() != n) throw Error(ErrorCode::DimensionMismatch, "distribution n differs from objective n");
  if (n > kMaxLevelN) throw Error(ErrorCode::TooLarge, "anchored chain supports n <= 10000");

  const std::size_t size = 2 * n;
  std::vector<double> fitness(size);
  std::vector<char> absorbing(size, 0);
  for (std::size_t m = 0; m < n; ++m) {
    fitness[anchored_state(n, false, m)] = static_cast<double>(m);
    fitness[anchored_state(n, true, m)] = anchor_weight + static_cast<double>(m);
  }
  absorbing[anchored_state(n, true, n - 1)] = 1;
  std::vector<std::size_t> flips;
  for (std::size_t r : dist.support()) {
    if (r >= 1) flips.push_back(r);
  }
  const double nn = static_cast<double>(n);
  auto value = detail::solve_elitist(fitness, absorbing, [&](std::size_t s, auto&& emit) {
    const bool b = s >= n;
    const std::size_t m = s - (b ? n : 0);
    for (std::size_t r : flips) {
      const double pr = dist.p(r);
      // Anchor flipped: r-1 flips among the other n-1 positions.
      {
        const auto row = drift::hypergeom_row(n - 1, r - 1, m);
        const double w = pr * static_cast<double>(r) / nn;
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (row[i] == 0.0) continue;
          const std::size_t t = anchored_state(n, !b, m + (r - 1 - i) - i);
          if (fitness[t] >= fitness[s]) emit(t, w * row[i]);
        }
      }
      if (r <= n - 1) {
        const auto row = drift::hypergeom_row(n - 1, r, m);
        const double w = pr * static_cast<double>(n - r) / nn;
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (row[i] == 0.0) continue;
          const std::size_t t = anchored_state(n, b, m + (r - i) - i);
          if (t != s && fitness[t] >= fitness[s]) emit(t, w * row[i]);
        }
      }
    }
  });
  return ChainSolution(StateSpace::AnchoredCompressed, n, std::move(value), std::move(absorbing));
}

// What the one-step drift measures.
//   EvaluatedDistance: d(x) - min(d(x), d(y)), the best-so-far distance over
//     all evaluated points (no selection).
//   IncumbentDistance: d(x) - d(x'), x' the incumbent after selection.
//   Weight: g(wrong bits of x) - g(wrong bits of x'), needs PotentialWeights.
enum class Potential { EvaluatedDistance, IncumbentDistance, Weight };

// Expected one-step decrease of the chosen potential from parent x, by
// enumerating every flip set (n <= 14). Distance potentials at larger n use
// the hypergeometric form; IncumbentDistance then needs a level-symmetric f.
inline double exact_step_drift(const Objective& f, const FlipDistribution& dist, const BitString& x, Potential kind,
                               const drift::PotentialWeights* pw = nullptr) {
  const std::size_t n = f.n();
  if (dist.n() != n || x.size() != n) throw Error(ErrorCode::DimensionMismatch, "objective, distribution and point disagree on n");
  if (kind == Potential::Weight) {
    if (pw == nullptr) throw Error(ErrorCode::BadInput, "weight potential needs PotentialWeights");
    if (pw->n != n) throw Error(ErrorCode::LengthMismatch, "potential weights have a different n");
  }

  if (n <= kMaxEnumerationN) {
    const auto parent = static_cast<std::uint64_t>(x.to_index());
    const double fx = f.evaluate(x);
    const std::size_t dx = distance(x);
    const double gx = kind == Potential::Weight ? drift::wrong_bit_potential(*pw, x) : 0.0;
    double total = 0.0;
    for (std::size_t h : dist.support()) {
      if (h == 0) continue;
      const double p = dist.p(h) / detail::binomial(n, h);
      double sum = 0.0;
      detail::for_each_subset(n, h, [&](std::uint64_t flip) {
        const BitString y = BitString::from_index(n, parent ^ flip);
        if (kind == Potential::EvaluatedDistance) {
          const std::size_t dy = distance(y);
          if (dy < dx) sum += static_cast<double>(dx - dy);
          return;
        }
        if (!(f.evaluate(y) >= fx)) return;
        if (kind == Potential::IncumbentDistance) {
          sum += static_cast<double>(dx) - static_cast<double>(distance(y));
        } else {
          sum += gx - drift::wrong_bit_potential(*pw, y);
        }
      });
      total += p * sum;
    }
    return total;
  }

  if (kind == Potential::Weight) throw Error(ErrorCode::TooLarge, "weight potential enumeration needs n <= 14");
  if (kind == Potential::IncumbentDistance && !f.is_level_symmetric()) {
    throw Error(ErrorCode::TooLarge, "incumbent drift beyond n = 14 needs a level-symmetric objective");
  }
  const std::size_t m = x.count_ones();
  const auto dist_of = [n](std::size_t ones) { return std::min(ones, n - ones); };
  const double dx = static_cast<double>(dist_of(m));
  double total = 0.0;
  for (std::size_t r : dist.support()) {
    if (r == 0) continue;
    const auto row = drift::hypergeom_row(n, r, m);
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0) continue;
      const std::size_t next = m + (r - i) - i;
      const double dy = static_cast<double>(dist_of(next));
      if (kind == Potential::EvaluatedDistance) {
        sum += row[i] * std::max(0.0, dx - dy);
      } else if (f.value_at_level(next) >= f.value_at_level(m)) {
        sum += row[i] * (dx - dy);
      }
    }
    total += dist.p(r) * sum;
  }
  return total;
}

// Exact rational evaluation of the hypergeometric quantities.
namespace exact {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  cpp_int v = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    v *= n - k + j;
    v /= j;
  }
  return v;
}

inline cpp_rational hypergeom_pmf(std::size_t n, std::size_t r, std::size_t d, std::size_t i) {
  if (i > d || i > r || r - i > n - d) return 0;
  return cpp_rational(binomial(d, i) * binomial(n - d, r - i), binomial(n, r));
}

inline cpp_rational B(std::size_t n, std::size_t d, std::size_t r) {
  cpp_rational total = 0;
  for (std::size_t i = (r + 1) / 2; i <= std::min(d, r); ++i) {
    total += cpp_rational(static_cast<long long>(2 * i) - static_cast<long long>(r)) * hypergeom_pmf(n, r, d, i);
  }
  return total;
}

}  // namespace exact

}  // namespace uea::oracle
