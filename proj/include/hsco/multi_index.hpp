#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

#include "hsco/errors.hpp"

namespace hsco {

// Exponent vector J = (j_1, ..., j_n), n >= 1, entries <= kMaxExponent.
class MultiIndex {
 public:
  static constexpr std::uint32_t kMaxExponent = 1'000'000;

  explicit MultiIndex(std::vector<std::uint32_t> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DimensionMismatch("multi-index needs at least one slot");
    for (auto j : parts_)
      if (j > kMaxExponent) throw ExponentOverflow("exponent exceeds limit", 0);
  }

  static MultiIndex zeros(std::size_t n) {
    return MultiIndex(std::vector<std::uint32_t>(n, 0u));
  }

  std::size_t size() const { return parts_.size(); }
  std::uint32_t operator[](std::size_t i) const { return parts_[i]; }
  const std::vector<std::uint32_t>& parts() const { return parts_; }

  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (auto j : parts_) d += j;
    return d;
  }

  // log(J!) = sum_i log(j_i!). Accurate to a few ulp; entries up to kMaxExponent.
  double log_factorial() const {
    double s = 0.0;
    for (auto j : parts_) s += std::lgamma(static_cast<double>(j) + 1.0);
    return s;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;
  // Plain lexicographic order on the parts.
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<std::uint32_t> parts_;
};

// Canonical term order: total degree ascending, then lexicographically
// descending, matching the order enumerate_degree produces within a degree.
struct CanonicalLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const auto da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a > b;
  }
};

// All J with size n and |J| = k, lexicographically descending in the first
// coordinate: (n=2, k=2) -> (2,0), (1,1), (0,2).
inline std::vector<MultiIndex> enumerate_degree(std::size_t n, std::uint32_t k) {
  if (n == 0) throw DimensionMismatch("enumerate_degree needs n >= 1");
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> cur(n, 0u);
  auto rec = [&](auto&& self, std::size_t pos, std::uint32_t rest) -> void {
    if (pos + 1 == n) {
      cur[pos] = rest;
      out.emplace_back(cur);
      return;
    }
    for (std::uint32_t j = rest; j != static_cast<std::uint32_t>(-1); --j) {
      cur[pos] = j;
      self(self, pos + 1, rest - j);
      if (j == 0) break;
    }
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace hsco
