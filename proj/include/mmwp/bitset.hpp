#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmwp {

/// Fixed-size dynamic bitset. std::vector<bool> has no word access and
/// std::bitset needs a compile-time size; grid sizes are runtime values.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (std::uint64_t w : w_)
      if (w) return true;
    return false;
  }

  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  bool intersects(const Bitset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c;
  }

  bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }

  std::size_t words() const { return w_.size(); }
  std::uint64_t word(std::size_t k) const { return w_[k]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace mmwp
