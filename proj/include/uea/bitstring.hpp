#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uea/error.hpp"
#include "uea/rng.hpp"

namespace uea {

// Fixed-length binary search point, packed 64 bits per word. The popcount
// OM(x) is cached and kept exact by every mutator. Position 0 is the first
// character of the textual form, i.e. x_1.
class BitString {
 public:
  BitString() = default;

  explicit BitString(std::size_t n, bool value = false)
      : n_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0), ones_(value ? n : 0) {
    clear_tail();
  }

  static BitString from_string(std::string_view text) {
    BitString x(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') {
        x.set(i, true);
      } else if (text[i] != '0') {
        throw Error(ErrorCode::BadInput, "bit string may contain only '0' and '1'");
      }
    }
    return x;
  }

  static BitString ones(std::size_t n) { return BitString(n, true); }
  static BitString zeros(std::size_t n) { return BitString(n, false); }

  static BitString random(std::size_t n, Rng& rng) {
    BitString x(n);
    for (auto& w : x.words_) w = rng();
    x.clear_tail();
    x.recount();
    return x;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t count_ones() const noexcept { return ones_; }
  std::size_t count_zeros() const noexcept { return n_ - ones_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  bool operator[](std::size_t i) const noexcept { return test(i); }

  void flip(std::size_t i) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    auto& w = words_[i >> 6];
    ones_ += (w & mask) ? std::size_t(-1) : std::size_t(1);
    w ^= mask;
  }

  void set(std::size_t i, bool value) noexcept {
    if (test(i) != value) flip(i);
  }

  void complement_in_place() noexcept {
    for (auto& w : words_) w = ~w;
    clear_tail();
    ones_ = n_ - ones_;
  }

  BitString complement() const {
    BitString y = *this;
    y.complement_in_place();
    return y;
  }

  std::size_t hamming(const BitString& other) const {
    if (other.n_ != n_) throw Error(ErrorCode::LengthMismatch, "hamming distance of unequal lengths");
    std::size_t h = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) h += std::popcount(words_[k] ^ other.words_[k]);
    return h;
  }

  // Low n bits as an integer; only meaningful for n <= 64.
  std::uint64_t to_index() const noexcept { return words_.empty() ? 0 : words_[0]; }

  static BitString from_index(std::size_t n, std::uint64_t index) {
    BitString x(n);
    if (!x.words_.empty()) x.words_[0] = index;
    x.clear_tail();
    x.recount();
    return x;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) s[i] = test(i) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void clear_tail() noexcept {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }
  void recount() noexcept {
    ones_ = 0;
    for (auto w : words_) ones_ += std::popcount(w);
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
  std::size_t ones_ = 0;
};

// d(x) = min(OM(x), n - OM(x)): distance to the nearer of 0^n and 1^n.
inline std::size_t distance(const BitString& x) noexcept {
  const std::size_t m = x.count_ones();
  return m < x.size() - m ? m : x.size() - m;
}

}  // namespace uea
