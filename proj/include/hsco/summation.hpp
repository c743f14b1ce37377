#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace hsco {

// Neumaier-compensated accumulator. Deterministic for a fixed add order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Balanced-tree reduction of leaf(lo), ..., leaf(hi-1). The split pattern is a
// function of the index range only, so the result is bit-reproducible.
template <class T, class Leaf>
T pairwise_sum(std::size_t lo, std::size_t hi, Leaf&& leaf) {
  const std::size_t n = hi - lo;
  if (n == 0) return T{};
  if (n <= 4) {
    T s = leaf(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) s += leaf(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  T a = pairwise_sum<T>(lo, mid, leaf);
  T b = pairwise_sum<T>(mid, hi, leaf);
  return a + b;
}

}  // namespace hsco
