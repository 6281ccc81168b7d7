#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uea/bitstring.hpp"
#include "uea/error.hpp"

namespace uea {

enum class ObjectiveKind { OneMax, Linear, BinVal, ParitySwap, Anchored };

inline const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::OneMax: return "onemax";
    case ObjectiveKind::Linear: return "linear";
    case ObjectiveKind::BinVal: return "binval";
    case ObjectiveKind::ParitySwap: return "parity_swap";
    case ObjectiveKind::Anchored: return "anchored";
  }
  return "unknown";
}

// Pseudo-Boolean benchmark function, maximized. Every kind keeps its global
// optimum at 1^n (parity_swap only for even n). Linear weights are strictly
// positive and stored sorted ascending; relabeling bits does not change the
// landscape seen by an unbiased algorithm.
class Objective {
 public:
  // Largest n for which binval's subset sums are exact doubles. Above it
  // evaluate() rounds (and overflows to +inf past n = 1024) while the engine
  // still compares binval points exactly, by their highest differing bit.
  static constexpr std::size_t kExactBinValN = 52;

  static Objective onemax(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::OutOfRange, "n must be positive");
    Objective f(ObjectiveKind::OneMax, n);
    f.coefficients_.assign(n, 1.0);
    return f;
  }

  static Objective linear(std::vector<double> weights) {
    if (weights.empty()) throw Error(ErrorCode::EmptyWeights, "linear objective needs weights");
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::NonPositiveWeight, "linear weights must be finite and > 0");
      }
    }
    std::sort(weights.begin(), weights.end());
    Objective f(ObjectiveKind::Linear, weights.size());
    f.coefficients_ = std::move(weights);
    return f;
  }

  static Objective binval(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::OutOfRange, "n must be positive");
    Objective f(ObjectiveKind::BinVal, n);
    f.coefficients_.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.coefficients_[i] = std::ldexp(1.0, static_cast<int>(i));
    return f;
  }

  // OM(x) if OM(x) is even, n - OM(x) otherwise.
  static Objective parity_swap(std::size_t n) {
    if (n < 2) throw Error(ErrorCode::OutOfRange, "parity_swap needs n >= 2");
    return Objective(ObjectiveKind::ParitySwap, n);
  }

  // anchor_weight * x_1 + sum_{i >= 2} x_i.
  static Objective anchored(std::size_t n, double anchor_weight) {
    if (n < 2) throw Error(ErrorCode::OutOfRange, "anchored needs n >= 2");
    if (!(anchor_weight > 0.0) || !std::isfinite(anchor_weight)) {
      throw Error(ErrorCode::NonPositiveWeight, "anchor weight must be finite and > 0");
    }
    Objective f(ObjectiveKind::Anchored, n);
    f.anchor_weight_ = anchor_weight;
    f.coefficients_.assign(n, 1.0);
    f.coefficients_[0] = anchor_weight;
    return f;
  }

  ObjectiveKind kind() const noexcept { return kind_; }
  // evaluate() returns exact values (false only for binval with n > 52).
  bool is_exact() const noexcept { return kind_ != ObjectiveKind::BinVal || n_ <= kExactBinValN; }
  std::size_t n() const noexcept { return n_; }
  double anchor_weight() const noexcept { return anchor_weight_; }

  // Fitness is a weighted sum of bits (every kind except parity_swap).
  bool is_linear() const noexcept { return kind_ != ObjectiveKind::ParitySwap; }
  // Fitness depends on OM(x) only.
  bool is_level_symmetric() const noexcept {
    return kind_ == ObjectiveKind::OneMax || kind_ == ObjectiveKind::ParitySwap;
  }
  // Per-position weights of a linear kind (all ones for onemax).
  std::span<const double> weights() const noexcept { return coefficients_; }

  double evaluate(const BitString& x) const {
    if (x.size() != n_) throw Error(ErrorCode::LengthMismatch, "bit string length differs from n");
    if (kind_ == ObjectiveKind::ParitySwap || kind_ == ObjectiveKind::OneMax) {
      return value_at_level(x.count_ones());
    }
    double total = 0.0;
    if (kind_ == ObjectiveKind::BinVal) {
      // Highest bits first so rounding for n > 52 is at most one ulp-ish.
      for (std::size_t i = n_; i-- > 0;) {
        if (x.test(i)) total += coefficients_[i];
      }
      return total;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (x.test(i)) total += coefficients_[i];
    }
    return total;
  }

  // Fitness of any point with `ones` one-bits; level-symmetric kinds only.
  double value_at_level(std::size_t ones) const noexcept {
    if (kind_ == ObjectiveKind::ParitySwap) {
      return static_cast<double>(ones % 2 == 0 ? ones : n_ - ones);
    }
    return static_cast<double>(ones);
  }

  BitString optimum() const { return BitString::ones(n_); }

  double optimum_value() const noexcept {
    if (kind_ == ObjectiveKind::ParitySwap) return static_cast<double>(n_ % 2 == 0 ? n_ : n_ - 1);
    double total = 0.0;
    if (kind_ == ObjectiveKind::BinVal) {
      for (std::size_t i = n_; i-- > 0;) total += coefficients_[i];
      return total;
    }
    for (double w : coefficients_) total += w;
    return total;
  }

  // Whether a point with `ones` one-bits is globally optimal. For every kind
  // optimality is decided by the popcount alone.
  bool is_optimal_level(std::size_t ones) const noexcept {
    if (kind_ == ObjectiveKind::ParitySwap) return value_at_level(ones) == optimum_value();
    return ones == n_;
  }
  bool is_optimal(const BitString& x) const noexcept { return is_optimal_level(x.count_ones()); }

 private:
  Objective(ObjectiveKind kind, std::size_t n) : kind_(kind), n_(n) {}

  ObjectiveKind kind_ = ObjectiveKind::OneMax;
  std::size_t n_ = 0;
  std::vector<double> coefficients_;
  double anchor_weight_ = 0.0;
};

inline double evaluate(const Objective& f, const BitString& x) { return f.evaluate(x); }

}  // namespace uea
