#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace pqlab {

// Square row-major block of samples, residuals, coefficients or levels.
template <typename T>
class Block {
 public:
  Block() = default;
  explicit Block(int n) : n_(n), v_(static_cast<size_t>(n) * n) { assert(n > 0); }
  Block(int n, T fill) : n_(n), v_(static_cast<size_t>(n) * n, fill) {}

  int n() const { return n_; }
  size_t cells() const { return v_.size(); }

  T& at(int x, int y) {
    assert(x >= 0 && x < n_ && y >= 0 && y < n_);
    return v_[static_cast<size_t>(y) * n_ + x];
  }
  T at(int x, int y) const {
    assert(x >= 0 && x < n_ && y >= 0 && y < n_);
    return v_[static_cast<size_t>(y) * n_ + x];
  }

  std::span<T> data() { return v_; }
  std::span<const T> data() const { return v_; }

  bool operator==(const Block&) const = default;

 private:
  int n_ = 0;
  std::vector<T> v_;
};

using LevelBlock = Block<int32_t>;

constexpr bool is_supported_tb_size(int n) { return n == 4 || n == 8 || n == 16 || n == 32; }

constexpr int ilog2(int n) {
  int r = 0;
  while (n > 1) {
    n >>= 1;
    ++r;
  }
  return r;
}

template <typename T>
constexpr T clamp_value(T v, T lo, T hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace pqlab
