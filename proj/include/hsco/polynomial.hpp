#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsco/errors.hpp"
#include "hsco/multi_index.hpp"
#include "hsco/summation.hpp"

namespace hsco {

using Complex = std::complex<double>;

namespace detail {

// Binary exponentiation; exponents can be as large as the parser admits.
inline Complex cpow(Complex z, std::uint32_t e) {
  Complex r{1.0, 0.0};
  while (e != 0) {
    if (e & 1u) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// Polynomial in m complex variables as a finitely supported coefficient map.
// Terms are kept in canonical order (degree ascending, then lexicographically
// descending) with no explicitly stored zeros.
class PolynomialMap {
 public:
  using Term = std::pair<MultiIndex, Complex>;

  explicit PolynomialMap(std::size_t m) : num_vars_(check_arity(m)) {}

  PolynomialMap(std::size_t m, const std::map<MultiIndex, Complex, CanonicalLess>& coeffs)
      : num_vars_(check_arity(m)) {
    terms_.reserve(coeffs.size());
    for (const auto& [J, c] : coeffs) {
      if (J.size() != num_vars_)
        throw DimensionMismatch("coefficient key arity differs from variable count");
      if (c != Complex{0.0, 0.0}) terms_.emplace_back(J, c);
    }
  }

  static PolynomialMap constant(std::size_t m, Complex c) {
    std::map<MultiIndex, Complex, CanonicalLess> one;
    one.emplace(MultiIndex::zeros(m), c);
    return PolynomialMap(m, one);
  }

  static PolynomialMap monomial(MultiIndex J, Complex c) {
    const std::size_t m = J.size();
    std::map<MultiIndex, Complex, CanonicalLess> one;
    one.emplace(std::move(J), c);
    return PolynomialMap(m, one);
  }

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex coefficient(const MultiIndex& J) const {
    const auto it = std::lower_bound(
        terms_.begin(), terms_.end(), J,
        [](const Term& t, const MultiIndex& key) { return CanonicalLess{}(t.first, key); });
    if (it != terms_.end() && it->first == J) return it->second;
    return {0.0, 0.0};
  }

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (const auto& [J, c] : terms_) d = std::max(d, J.degree());
    return d;
  }

  // Largest / smallest exponent of variable v over the support (0 for the zero
  // polynomial). Their difference is the trig degree of theta_v -> |p|^2 on
  // the torus, which the sup certification needs.
  std::uint32_t degree_in(std::size_t v) const {
    std::uint32_t d = 0;
    for (const auto& [J, c] : terms_) d = std::max(d, J[v]);
    return d;
  }
  std::uint32_t min_degree_in(std::size_t v) const {
    if (terms_.empty()) return 0;
    std::uint32_t d = MultiIndex::kMaxExponent;
    for (const auto& [J, c] : terms_) d = std::min(d, J[v]);
    return d;
  }

  // Terms are combined by balanced-tree reduction in canonical order, so the
  // value is reproducible bit for bit.
  Complex eval(std::span<const Complex> z) const {
    if (z.size() != num_vars_)
      throw DimensionMismatch("evaluation point arity differs from variable count");
    if (terms_.empty()) return {0.0, 0.0};
    return pairwise_sum<Complex>(0, terms_.size(), [&](std::size_t i) {
      const auto& [J, c] = terms_[i];
      Complex v = c;
      for (std::size_t k = 0; k < num_vars_; ++k)
        if (J[k] != 0) v *= detail::cpow(z[k], J[k]);
      return v;
    });
  }

  // Splits into homogeneous slices; absent degrees are absent keys.
  std::map<std::uint64_t, PolynomialMap> homogeneous_parts() const {
    std::map<std::uint64_t, std::map<MultiIndex, Complex, CanonicalLess>> buckets;
    for (const auto& [J, c] : terms_) buckets[J.degree()].emplace(J, c);
    std::map<std::uint64_t, PolynomialMap> out;
    for (auto& [deg, coeffs] : buckets) out.emplace(deg, PolynomialMap(num_vars_, coeffs));
    return out;
  }

  // Fractional power of the degree-scaling operator: the degree-k slice is
  // multiplied by k^t and the constant part is dropped. t = 1 is the Euler
  // operator sum_k z_k d/dz_k on polynomials.
  PolynomialMap radial_derivative(double t) const {
    std::map<MultiIndex, Complex, CanonicalLess> out;
    for (const auto& [J, c] : terms_) {
      const std::uint64_t k = J.degree();
      if (k == 0) continue;
      out.emplace(J, c * std::pow(static_cast<double>(k), t));
    }
    return PolynomialMap(num_vars_, out);
  }

  // Canonical text form; parse_poly() accepts it unchanged.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [J, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + detail::format_real(c.real());
      if (c.imag() != 0.0)
        s += (c.imag() < 0 ? "-" : "+") + detail::format_real(std::abs(c.imag())) + "i";
      s += ")";
      for (std::size_t v = 0; v < num_vars_; ++v) {
        if (J[v] == 0) continue;
        s += "*z" + std::to_string(v + 1);
        if (J[v] >= 2) s += "^" + std::to_string(J[v]);
      }
    }
    return s;
  }

 private:
  static std::size_t check_arity(std::size_t m) {
    if (m == 0) throw DimensionMismatch("polynomial needs at least one variable");
    return m;
  }

  std::size_t num_vars_;
  std::vector<Term> terms_;
};

// Tuple of polynomials sharing one domain arity: the symbol map
// z in D^m -> (p_1(z), ..., p_n(z)).
struct VectorSymbol {
  std::vector<PolynomialMap> components;

  explicit VectorSymbol(std::vector<PolynomialMap> comps) : components(std::move(comps)) {
    if (components.empty()) throw DimensionMismatch("symbol needs at least one component");
    for (const auto& p : components)
      if (p.num_vars() != components.front().num_vars())
        throw DimensionMismatch("symbol components disagree on variable count");
  }

  std::size_t range_dim() const { return components.size(); }
  std::size_t domain_dim() const { return components.front().num_vars(); }
};

enum class TargetGeometry { Ball, Polydisk };

namespace detail {

// Maxima of the squared moduli over the uniform torus grid with `density`
// angles per variable: the aggregate sum-of-squares and each component alone.
struct TorusScan {
  double ball_sq_max = 0.0;
  std::vector<double> comp_sq_max;
};

inline TorusScan scan_torus_moduli(const VectorSymbol& phi, int density) {
  if (density < 8) throw ValidationError("torus grid density must be at least 8");
  const std::size_t m = phi.domain_dim();
  const std::size_t n = phi.range_dim();

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<Complex> ring(static_cast<std::size_t>(density));
  for (int s = 0; s < density; ++s) {
    const double th = kTwoPi * static_cast<double>(s) / static_cast<double>(density);
    ring[static_cast<std::size_t>(s)] = Complex{std::cos(th), std::sin(th)};
  }

  TorusScan scan;
  scan.comp_sq_max.assign(n, 0.0);
  std::vector<std::size_t> idx(m, 0);
  std::vector<Complex> z(m);
  for (;;) {
    for (std::size_t v = 0; v < m; ++v) z[v] = ring[idx[v]];
    double agg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sq = std::norm(phi.components[i].eval(z));
      agg += sq;
      scan.comp_sq_max[i] = std::max(scan.comp_sq_max[i], sq);
    }
    scan.ball_sq_max = std::max(scan.ball_sq_max, agg);

    std::size_t v = 0;
    while (v < m && ++idx[v] == static_cast<std::size_t>(density)) idx[v++] = 0;
    if (v == m) break;
  }
  return scan;
}

}  // namespace detail

// Grid estimate of the sup of |phi| over the closed unit polydisk, measured in
// the target's own norm (Euclidean for the ball, max-modulus for the
// polydisk). By the maximum principle the true sup lives on the distinguished
// boundary; this returns the raw grid maximum, a lower bound of it.
inline double sup_modulus_estimate(const VectorSymbol& phi, TargetGeometry target,
                                   int grid_density) {
  const auto scan = detail::scan_torus_moduli(phi, grid_density);
  if (target == TargetGeometry::Ball) return std::sqrt(scan.ball_sq_max);
  double worst = 0.0;
  for (double sq : scan.comp_sq_max) worst = std::max(worst, sq);
  return std::sqrt(worst);
}

}  // namespace hsco
