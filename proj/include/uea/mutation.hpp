#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "uea/bitstring.hpp"
#include "uea/distributions.hpp"
#include "uea/error.hpp"
#include "uea/rng.hpp"

namespace uea {

// Draws uniformly random k-subsets of [0, n) by partial Fisher-Yates over a
// persistent index array. The array is never reset between draws: a partial
// shuffle started from any permutation still yields a uniform subset, so one
// sampler serves a whole run without reallocation.
class FlipSampler {
 public:
  explicit FlipSampler(std::size_t n) : index_(n) {
    std::iota(index_.begin(), index_.end(), std::uint32_t{0});
  }

  std::size_t n() const noexcept { return index_.size(); }

  // k distinct positions. For k > n/2 only the n-k kept positions are
  // shuffled into the prefix and the flip set is the remaining suffix.
  std::span<const std::uint32_t> draw(std::size_t k, Rng& rng) {
    const std::size_t n = index_.size();
    const bool complement = 2 * k > n;
    const std::size_t m = complement ? n - k : k;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + uniform_below(rng, static_cast<std::uint32_t>(n - i));
      std::swap(index_[i], index_[j]);
    }
    const std::span<const std::uint32_t> all(index_);
    return complement ? all.subspan(m) : all.first(k);
  }

 private:
  std::vector<std::uint32_t> index_;
};

// flip_k: x with a uniformly random set of exactly k positions flipped.
inline BitString flip_k(const BitString& x, std::size_t k, Rng& rng) {
  if (k > x.size()) throw Error(ErrorCode::OutOfRange, "cannot flip more than n bits");
  BitString y = x;
  if (k == x.size()) {
    y.complement_in_place();
    return y;
  }
  FlipSampler sampler(x.size());
  for (auto pos : sampler.draw(k, rng)) y.flip(pos);
  return y;
}

struct Mutation {
  BitString offspring;
  std::size_t flips = 0;
};

// mut_D: draw k ~ D, then flip_k.
inline Mutation mutate(const BitString& x, const FlipDistribution& d, Rng& rng) {
  if (d.n() != x.size()) throw Error(ErrorCode::LengthMismatch, "distribution n differs from bit string length");
  const std::size_t k = d.sample(rng);
  return {flip_k(x, k, rng), k};
}

}  // namespace uea
