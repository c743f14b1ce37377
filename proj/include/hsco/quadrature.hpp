#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hsco/errors.hpp"
#include "hsco/polynomial.hpp"
#include "hsco/spaces.hpp"
#include "hsco/summation.hpp"

namespace hsco {

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix by the QL algorithm with
// implicit shifts, tracking one row of the accumulated rotation so the first
// components of the normalized eigenvectors come out in v. d holds the
// diagonal (overwritten with eigenvalues), e the subdiagonal in e[0..n-2].
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                           std::vector<double>& v) {
  const int n = static_cast<int>(d.size());
  if (n == 0) throw Error("empty tridiagonal system");
  e.resize(static_cast<std::size_t>(n));
  e[static_cast<std::size_t>(n) - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw Error("tridiagonal eigenvalue iteration stalled");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool split = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            split = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          const double vi = v[i], vi1 = v[i + 1];
          v[i + 1] = s * vi + c * vi1;
          v[i] = c * vi - s * vi1;
        }
        if (split) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

// Normalized quadrature rule for the probability measure
// (beta+1)(1-|z|^2)^beta dA(z)/pi on the unit disk, factored through
// z = sqrt(x) e^(i theta): Gauss nodes for the weight (1-x)^beta on (0,1)
// crossed with a uniform angular rule. Radial weights sum to 1, so the rule
// integrates constants exactly.
struct DiskRule {
  double beta = 0.0;
  std::vector<double> radial_x;  // ascending, strictly inside (0,1)
  std::vector<double> radial_w;
  int angular = 0;
  std::vector<double> sqrt_x;
  std::vector<Complex> phases;  // e^(2 pi i j / angular)

  std::size_t node_count() const { return radial_x.size() * static_cast<std::size_t>(angular); }
};

// Normalized moment of the radial weight: integral of x^j against
// (beta+1)(1-x)^beta dx over (0,1).
inline double radial_moment(double beta, std::uint32_t j) {
  const double jd = static_cast<double>(j);
  return std::exp(std::lgamma(jd + 1.0) + std::lgamma(beta + 2.0) -
                  std::lgamma(jd + beta + 2.0));
}

inline DiskRule build_disk_rule(double beta, int n_rad, int n_ang) {
  if (!(beta > -1.0)) throw InvalidWeight("disk rule weight exponent must exceed -1");
  if (n_rad < 2) throw ValidationError("disk rule needs at least 2 radial nodes");
  if (n_ang < 4) throw ValidationError("disk rule needs at least 4 angular nodes");

  // Monic Jacobi recurrence for the weight (1-u)^beta on [-1,1]; the map
  // x = (1+u)/2 carries it to (1-x)^beta on (0,1).
  const int r = n_rad;
  std::vector<double> d(static_cast<std::size_t>(r), 0.0);
  std::vector<double> e(static_cast<std::size_t>(r), 0.0);
  std::vector<double> v(static_cast<std::size_t>(r), 0.0);
  d[0] = -beta / (beta + 2.0);
  for (int k = 1; k < r; ++k) {
    const double kd = static_cast<double>(k);
    d[static_cast<std::size_t>(k)] =
        -(beta * beta) / ((2.0 * kd + beta) * (2.0 * kd + beta + 2.0));
    double bk;
    if (k == 1) {
      bk = 4.0 * (beta + 1.0) / ((beta + 2.0) * (beta + 2.0) * (beta + 3.0));
    } else {
      const double s2 = 2.0 * kd + beta;
      bk = 4.0 * kd * kd * (kd + beta) * (kd + beta) /
           (s2 * s2 * (s2 + 1.0) * (s2 - 1.0));
    }
    e[static_cast<std::size_t>(k - 1)] = std::sqrt(bk);
  }
  v[0] = 1.0;
  detail::tridiagonal_ql(d, e, v);

  std::vector<int> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  DiskRule rule;
  rule.beta = beta;
  rule.angular = n_ang;
  rule.radial_x.resize(static_cast<std::size_t>(r));
  rule.radial_w.resize(static_cast<std::size_t>(r));
  CompensatedSum total;
  for (int i = 0; i < r; ++i) {
    rule.radial_x[i] = 0.5 * (1.0 + d[order[i]]);
    rule.radial_w[i] = v[order[i]] * v[order[i]];
    total.add(rule.radial_w[i]);
  }
  // Squared first components already sum to 1 in exact arithmetic; renormalize
  // and push the rounding residual onto the largest weight so the rule
  // integrates 1 to the last bit.
  const double inv = 1.0 / total.value();
  std::size_t imax = 0;
  CompensatedSum after;
  for (int i = 0; i < r; ++i) {
    rule.radial_w[i] *= inv;
    after.add(rule.radial_w[i]);
    if (rule.radial_w[i] > rule.radial_w[imax]) imax = static_cast<std::size_t>(i);
  }
  rule.radial_w[imax] -= after.value() - 1.0;

  rule.sqrt_x.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    if (!(rule.radial_x[i] > 0.0 && rule.radial_x[i] < 1.0))
      throw Error("radial node escaped (0,1)");
    rule.sqrt_x[i] = std::sqrt(rule.radial_x[i]);
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  rule.phases.resize(static_cast<std::size_t>(n_ang));
  for (int j = 0; j < n_ang; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n_ang);
    rule.phases[j] = Complex{std::cos(th), std::sin(th)};
  }

  // Moment self-check against the exact Beta-function values.
  const std::uint32_t jmax = std::min<std::uint32_t>(12, static_cast<std::uint32_t>(2 * r - 1));
  for (std::uint32_t j = 1; j <= jmax; ++j) {
    CompensatedSum mj;
    for (int i = 0; i < r; ++i)
      mj.add(rule.radial_w[i] * std::pow(rule.radial_x[i], static_cast<double>(j)));
    const double want = radial_moment(beta, j);
    if (std::abs(mj.value() - want) > 1e-12 * want)
      throw Error("disk rule failed its moment self-check at power " + std::to_string(j));
  }
  return rule;
}

// Tensor power of one disk rule: the quadrature domain is the polydisk D^m.
// m = 1 is the plain disk. Node order is axis-0 outermost, and per axis
// radial-ascending outer / angular-ascending inner; every consumer walks
// nodes in exactly this order.
struct PolydiskRule {
  int m = 1;
  DiskRule axis;

  std::size_t node_count() const {
    std::size_t per = axis.node_count(), total = 1;
    for (int i = 0; i < m; ++i) total *= per;
    return total;
  }
};

inline PolydiskRule build_polydisk_rule(double beta, int m, int n_rad, int n_ang) {
  if (m < 1) throw ValidationError("quadrature domain dimension must be at least 1");
  return PolydiskRule{m, build_disk_rule(beta, n_rad, n_ang)};
}

namespace detail {

inline void disk_node(const DiskRule& R, std::size_t q, Complex& z, double& w) {
  const std::size_t i = q / static_cast<std::size_t>(R.angular);
  const std::size_t j = q % static_cast<std::size_t>(R.angular);
  z = R.sqrt_x[i] * R.phases[j];
  w = R.radial_w[i] / static_cast<double>(R.angular);
}

[[noreturn]] inline void report_non_finite(std::span<const Complex> z) {
  std::string where = "integrand not finite at node z = (";
  for (std::size_t v = 0; v < z.size(); ++v) {
    if (v) where += ", ";
    where += std::to_string(z[v].real()) + (z[v].imag() < 0 ? "" : "+") +
             std::to_string(z[v].imag()) + "i";
  }
  throw NonFiniteSample(where + ")");
}

}  // namespace detail

// Streams nodes in the canonical order. Visit receives
// (std::span<const Complex> z, double weight).
template <class Visit>
void for_each_node(const PolydiskRule& R, Visit&& visit) {
  const std::size_t m = static_cast<std::size_t>(R.m);
  const std::size_t per = R.axis.node_count();
  std::vector<std::size_t> idx(m, 0);
  std::vector<Complex> z(m);
  std::vector<double> wv(m);
  for (std::size_t v = 0; v < m; ++v) detail::disk_node(R.axis, 0, z[v], wv[v]);
  for (;;) {
    double w = wv[0];
    for (std::size_t v = 1; v < m; ++v) w *= wv[v];
    visit(std::span<const Complex>(z.data(), m), w);

    // Odometer: last axis fastest, matching the linear node index.
    std::size_t v = m;
    for (;;) {
      if (v == 0) return;
      --v;
      if (++idx[v] < per) {
        detail::disk_node(R.axis, idx[v], z[v], wv[v]);
        break;
      }
      idx[v] = 0;
      detail::disk_node(R.axis, 0, z[v], wv[v]);
    }
  }
}

// Weighted integral of f against the rule's probability measure with
// balanced-tree (pairwise) reduction over the fixed node order. Non-finite
// samples abort with the offending node reported.
template <class F>
Complex integrate(const PolydiskRule& R, F&& f) {
  const std::size_t m = static_cast<std::size_t>(R.m);
  const std::size_t per = R.axis.node_count();
  std::vector<Complex> z(m);
  auto leaf = [&](std::size_t q) -> Complex {
    double w = 1.0;
    std::size_t rem = q;
    for (std::size_t v = m; v-- > 0;) {
      double wa;
      detail::disk_node(R.axis, rem % per, z[v], wa);
      rem /= per;
      w *= wa;
    }
    const Complex val = f(std::span<const Complex>(z.data(), m));
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
      detail::report_non_finite(std::span<const Complex>(z.data(), m));
    return w * val;
  };
  return pairwise_sum<Complex>(0, R.node_count(), leaf);
}

template <class F>
double integrate_real(const PolydiskRule& R, F&& f) {
  const std::size_t m = static_cast<std::size_t>(R.m);
  const std::size_t per = R.axis.node_count();
  std::vector<Complex> z(m);
  auto leaf = [&](std::size_t q) -> double {
    double w = 1.0;
    std::size_t rem = q;
    for (std::size_t v = m; v-- > 0;) {
      double wa;
      detail::disk_node(R.axis, rem % per, z[v], wa);
      rem /= per;
      w *= wa;
    }
    const double val = f(std::span<const Complex>(z.data(), m));
    if (!std::isfinite(val)) detail::report_non_finite(std::span<const Complex>(z.data(), m));
    return w * val;
  };
  return pairwise_sum<double>(0, R.node_count(), leaf);
}

template <class F>
Complex integrate(const DiskRule& R, F&& f) {
  return integrate(PolydiskRule{1, R}, [&](std::span<const Complex> z) { return f(z[0]); });
}

template <class F>
double integrate_real(const DiskRule& R, F&& f) {
  return integrate_real(PolydiskRule{1, R}, [&](std::span<const Complex> z) { return f(z[0]); });
}

// Both sides of the change-of-variables identity behind the invariant-measure
// rewrite of the characterization integral, on the same nodes. The left side
// integrates the plain closed form; the right side routes through the
// invariant measure with the density written out, so agreement checks the
// weight bookkeeping rather than reproducing one expression twice.
struct MobiusCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline MobiusCheck mobius_consistency(const CharacterizationExponent& expnt,
                                      const VectorSymbol& phi, const PolynomialMap& psi,
                                      const DiskRule& rule) {
  if (phi.domain_dim() != 1 || psi.num_vars() != 1)
    throw DimensionMismatch("the invariant-measure identity is a disk statement");
  const double beta = rule.beta;
  const std::size_t n = phi.range_dim();

  auto lhs_f = [&](Complex z) {
    std::span<const Complex> pt(&z, 1);
    double val = std::norm(psi.eval(pt));
    if (expnt.per_factor) {
      for (std::size_t i = 0; i < n; ++i)
        val *= std::pow(1.0 - std::norm(phi.components[i].eval(pt)), -expnt.value);
    } else {
      double u = 0.0;
      for (std::size_t i = 0; i < n; ++i) u += std::norm(phi.components[i].eval(pt));
      val *= std::pow(1.0 - u, -expnt.value);
    }
    return val;
  };

  auto rhs_f = [&](Complex z) {
    std::span<const Complex> pt(&z, 1);
    const double x = std::norm(z);
    double val = std::norm(psi.eval(pt));
    if (expnt.per_factor) {
      for (std::size_t i = 0; i < n; ++i)
        val *= std::pow((1.0 - x) / (1.0 - std::norm(phi.components[i].eval(pt))),
                        expnt.value);
    } else {
      double u = 0.0;
      for (std::size_t i = 0; i < n; ++i) u += std::norm(phi.components[i].eval(pt));
      val *= std::pow((1.0 - x) / (1.0 - u), expnt.value);
    }
    // Invariant-measure density relative to the rule's probability measure.
    return val / ((beta + 1.0) * std::pow(1.0 - x, beta + 2.0));
  };

  MobiusCheck out;
  out.lhs = integrate_real(rule, lhs_f);
  out.rhs = (beta + 1.0) * integrate_real(rule, rhs_f);
  return out;
}

}  // namespace hsco
