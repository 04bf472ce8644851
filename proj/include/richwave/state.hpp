#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace richwave {

inline constexpr std::size_t kMaxComponents = 8;

/// Vector of Riemann invariants with inline storage. Systems in this library
/// carry at most kMaxComponents components, so states never allocate.
class State {
 public:
  State() = default;

  explicit State(std::size_t n, double fill = 0.0) : size_(n) {
    if (n > kMaxComponents) throw std::length_error("State: too many components");
    std::fill_n(values_.begin(), n, fill);
  }

  State(std::initializer_list<double> values) : size_(values.size()) {
    if (size_ > kMaxComponents) throw std::length_error("State: too many components");
    std::copy(values.begin(), values.end(), values_.begin());
  }

  explicit State(std::span<const double> values) : size_(values.size()) {
    if (size_ > kMaxComponents) throw std::length_error("State: too many components");
    std::copy(values.begin(), values.end(), values_.begin());
  }

  std::size_t size() const noexcept { return size_; }

  double& operator[](std::size_t i) noexcept {
    assert(i < size_);
    return values_[i];
  }
  double operator[](std::size_t i) const noexcept {
    assert(i < size_);
    return values_[i];
  }

  std::span<const double> values() const noexcept { return {values_.data(), size_}; }
  std::span<double> values() noexcept { return {values_.data(), size_}; }

  const double* begin() const noexcept { return values_.data(); }
  const double* end() const noexcept { return values_.data() + size_; }

  friend bool operator==(const State& a, const State& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<double, kMaxComponents> values_{};
  std::size_t size_ = 0;
};

/// (1-s)*a + s*b, componentwise.
inline State lerp(const State& a, const State& b, double s) {
  assert(a.size() == b.size());
  State out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (b[i] - a[i]);
  return out;
}

}  // namespace richwave
