#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hsco/errors.hpp"
#include "hsco/polynomial.hpp"
#include "hsco/quadrature.hpp"
#include "hsco/spaces.hpp"
#include "hsco/summation.hpp"

namespace hsco {

struct Tolerances {
  double rel = 1e-8;            // relative slack for the exact-match verdict
  double divergence_cap = 1e12; // partial-sum level treated as blown up
  double boundary_delta = 1e-3; // sup closer to 1 than this: closed form flagged infinite
};

// One verification problem: operator symbol pair (phi, psi) on D^m, source
// space, truncation order, and the quadrature rule for the target measure.
struct HSJob {
  SourceSpace source;
  OperatorKind op;
  VectorSymbol phi;
  PolynomialMap psi;
  int truncation;
  PolydiskRule rule;
  Tolerances tol;
};

// Default tensor resolution per domain dimension. One disk affords a dense
// rule; tensor powers scale node count geometrically, so per-axis resolution
// steps down (interior analyticity of the admissible integrands keeps the
// Gauss error far below the acceptance tolerances at these sizes).
inline std::pair<int, int> default_resolution(int m) {
  if (m <= 1) return {64, 128};
  if (m == 2) return {24, 48};
  return {12, 24};
}

inline HSJob make_job(const SourceSpace& source, const OperatorKind& op, VectorSymbol phi,
                      PolynomialMap psi, int truncation, int n_rad = 0, int n_ang = 0,
                      const Tolerances& tol = Tolerances{}) {
  validate_pairing(source, op);
  if (static_cast<int>(phi.range_dim()) != source.n)
    throw ValidationError("symbol component count differs from source dimension");
  const int m = static_cast<int>(phi.domain_dim());
  if (psi.num_vars() != static_cast<std::size_t>(m))
    throw ValidationError("weight symbol arity differs from the domain dimension");
  if (m > 3) throw ValidationError("domain dimension is supported up to 3");
  if (m != 1 && op.family != OperatorFamily::Composition)
    throw ValidationError("differentiation families are one-variable-domain statements");
  if (truncation < 1 || truncation > 100000)
    throw ValidationError("truncation order must lie in [1, 100000]");
  const auto [dr, da] = default_resolution(m);
  if (n_rad == 0) n_rad = dr;
  if (n_ang == 0) n_ang = da;
  const double beta = target_beta(source);
  return HSJob{source, op, std::move(phi), std::move(psi), truncation,
               build_polydisk_rule(beta, m, n_rad, n_ang), tol};
}

namespace detail {

// Grid sup data plus a certified inflation. The raw aggregate figure is what
// reports show; the inflated squared values feed the tail bounds, where an
// under-estimated sup would silently shrink a rigorous bound.
struct SupInfo {
  double raw = 0.0;              // grid sup of |phi| in the target norm
  double cert_sq = 0.0;          // >= sup of the ball aggregate sum |phi_i|^2
  std::vector<double> comp_cert_sq;  // >= sup of each |phi_i|^2
};

// theta_v -> |p_i(e^i theta)|^2 is a trig polynomial of degree
// (max exponent - min exponent) of variable v over the support.
inline std::uint64_t trig_degree_sum(const PolynomialMap& p) {
  std::uint64_t s = 0;
  for (std::size_t v = 0; v < p.num_vars(); ++v)
    s += p.degree_in(v) - p.min_degree_in(v);
  return s;
}

inline SupInfo compute_sup_info(const VectorSymbol& phi, TargetGeometry target) {
  const std::size_t m = phi.domain_dim();
  std::uint64_t dsum = 0;
  for (const auto& c : phi.components) dsum = std::max(dsum, trig_degree_sum(c));

  int base = m == 1 ? 2048 : (m == 2 ? 128 : 64);
  const std::uint64_t need = 16 * std::max<std::uint64_t>(dsum, 1);
  const int density = static_cast<int>(std::max<std::uint64_t>(base, need));

  const auto scan = scan_torus_moduli(phi, density);
  // Bernstein step bound: sup q <= grid max / (1 - pi * sum_v deg_v / N).
  const double fac = 1.0 - 3.14159265358979323846 * static_cast<double>(dsum) /
                               static_cast<double>(density);

  SupInfo info;
  if (target == TargetGeometry::Ball) {
    info.raw = std::sqrt(scan.ball_sq_max);
  } else {
    double worst = 0.0;
    for (double sq : scan.comp_sq_max) worst = std::max(worst, sq);
    info.raw = std::sqrt(worst);
  }
  info.cert_sq = scan.ball_sq_max / fac;
  info.comp_cert_sq.resize(scan.comp_sq_max.size());
  for (std::size_t i = 0; i < scan.comp_sq_max.size(); ++i)
    info.comp_cert_sq[i] = scan.comp_sq_max[i] / fac;
  return info;
}

inline TargetGeometry geometry_of(const SourceSpace& s) {
  return is_ball(s.kind) ? TargetGeometry::Ball : TargetGeometry::Polydisk;
}

// Per-axis basis factor of a polydisk source, as a function of the single-
// variable exponent.
inline std::vector<double> axis_factors(const SourceSpace& s, int count) {
  std::vector<double> f(static_cast<std::size_t>(count), 1.0);
  if (s.kind == SpaceKind::BergmanPolydisk) {
    const double la = std::lgamma(s.alpha + 2.0);
    for (int j = 0; j < count; ++j)
      f[j] = std::exp(std::lgamma(j + s.alpha + 2.0) - std::lgamma(j + 1.0) - la);
  }
  return f;
}

}  // namespace detail

// Monotone partial sums S_0..S_K of the squared Hilbert-Schmidt norm over the
// orthonormal basis, degree by degree. Ball sources collapse each degree onto
// a power of the aggregate ||phi||^2; polydisk sources take a truncated
// product convolution across axes. Single streaming pass in the rule's node
// order with per-degree compensated accumulators.
inline std::vector<double> hs_sum_truncated(const HSJob& job) {
  const int K = job.truncation;
  const std::size_t n = job.phi.range_dim();
  std::vector<CompensatedSum> degree_sum(static_cast<std::size_t>(K) + 1);

  if (is_ball(job.source.kind)) {
    for_each_node(job.rule, [&](std::span<const Complex> z, double w) {
      const double wpsi = w * std::norm(job.psi.eval(z));
      double u = 0.0;
      for (std::size_t i = 0; i < n; ++i) u += std::norm(job.phi.components[i].eval(z));
      if (!std::isfinite(wpsi) || !std::isfinite(u)) detail::report_non_finite(z);
      double cur = wpsi;
      for (int k = 0; k <= K; ++k) {
        degree_sum[k].add(cur);
        cur *= u;
      }
    });
    std::vector<double> out(static_cast<std::size_t>(K) + 1);
    CompensatedSum s;
    for (int k = 0; k <= K; ++k) {
      s.add(collapsed_coefficient(job.source, job.op, static_cast<std::uint64_t>(k)) *
            degree_sum[k].value());
      out[k] = s.value();
    }
    return out;
  }

  const auto axc = detail::axis_factors(job.source, K + 1);
  std::vector<double> axis(static_cast<std::size_t>(K) + 1);
  std::vector<double> slice(static_cast<std::size_t>(K) + 1);
  std::vector<double> next(static_cast<std::size_t>(K) + 1);
  for_each_node(job.rule, [&](std::span<const Complex> z, double w) {
    const double wpsi = w * std::norm(job.psi.eval(z));
    if (!std::isfinite(wpsi)) detail::report_non_finite(z);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = std::norm(job.phi.components[i].eval(z));
      if (!std::isfinite(y)) detail::report_non_finite(z);
      double yp = 1.0;
      for (int j = 0; j <= K; ++j) {
        axis[j] = axc[j] * yp;
        yp *= y;
      }
      if (i == 0) {
        slice = axis;
      } else {
        // Degree-truncated product across axes.
        for (int k = 0; k <= K; ++k) {
          double acc = 0.0;
          for (int j = 0; j <= k; ++j) acc += slice[j] * axis[k - j];
          next[k] = acc;
        }
        std::swap(slice, next);
      }
    }
    for (int k = 0; k <= K; ++k) degree_sum[k].add(wpsi * slice[k]);
  });
  std::vector<double> out(static_cast<std::size_t>(K) + 1);
  CompensatedSum s;
  for (int k = 0; k <= K; ++k) {
    s.add(degree_sum[k].value());
    out[k] = s.value();
  }
  return out;
}

// Closed-form characterization integral. Finite only when the symbol stays
// uniformly inside the target domain; otherwise the flag trips and the margin
// records how far past the admissible band the sup estimate sits.
struct CharacterizationValue {
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();
  double margin = 0.0;  // 1 - (grid sup estimate)
};

namespace detail {

inline CharacterizationValue characterization_with(const HSJob& job, const SupInfo& sup) {
  CharacterizationValue out;
  out.margin = 1.0 - sup.raw;
  if (sup.raw >= 1.0 - job.tol.boundary_delta) return out;

  const auto expnt = closed_form_exponent(job.source, job.op);
  const std::size_t n = job.phi.range_dim();
  out.value = integrate_real(job.rule, [&](std::span<const Complex> z) {
    double val = std::norm(job.psi.eval(z));
    if (expnt.per_factor) {
      for (std::size_t i = 0; i < n; ++i)
        val *= std::pow(1.0 - std::norm(job.phi.components[i].eval(z)), -expnt.value);
    } else {
      double u = 0.0;
      for (std::size_t i = 0; i < n; ++i) u += std::norm(job.phi.components[i].eval(z));
      val *= std::pow(1.0 - u, -expnt.value);
    }
    return val;
  });
  out.finite = true;
  return out;
}

}  // namespace detail

inline CharacterizationValue hs_characterization(const HSJob& job) {
  return detail::characterization_with(
      job, detail::compute_sup_info(job.phi, detail::geometry_of(job.source)));
}

// Rigorous upper bound on the dropped tail sum_{|J| > K}. Unavailable when
// the certified sup reaches the boundary or the coefficient growth beats the
// decay of the symbol powers.
struct TailBound {
  bool available = false;
  double value = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double weight_mass(const HSJob& job) {
  return integrate_real(job.rule,
                        [&](std::span<const Complex> z) { return std::norm(job.psi.eval(z)); });
}

inline TailBound tail_bound_with(const HSJob& job, int K, const SupInfo& sup) {
  TailBound out;
  if (is_ball(job.source.kind)) {
    const double U = sup.cert_sq;  // certified bound on sup ||phi||^2
    if (!(U < 1.0)) return out;
    // Coefficient ratios decrease in k, so the tail is dominated by the
    // geometric series with the first dropped ratio.
    const double r =
        collapsed_ratio(job.source, job.op, static_cast<std::uint64_t>(K) + 1) * U;
    if (!(r < 1.0)) return out;
    const double head =
        collapsed_coefficient(job.source, job.op, static_cast<std::uint64_t>(K) + 1) *
        std::pow(U, static_cast<double>(K) + 1.0);
    out.value = head / (1.0 - r) * weight_mass(job);
    out.available = std::isfinite(out.value);
    return out;
  }

  // Polydisk: indices beyond total degree K live outside the per-axis box
  // [0, K/n]^n, so the tail is at most the full product minus the box sum,
  // each axis evaluated at its certified sup.
  const std::size_t n = job.phi.range_dim();
  const int jmax = K / static_cast<int>(n);
  const double q = closed_form_exponent(job.source, job.op).value;
  const auto axc = detail::axis_factors(job.source, jmax + 1);
  double full = 1.0, box = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = sup.comp_cert_sq[i];
    if (!(y < 1.0)) return out;
    full *= std::pow(1.0 - y, -q);
    CompensatedSum b;
    double yp = 1.0;
    for (int j = 0; j <= jmax; ++j) {
      b.add(axc[j] * yp);
      yp *= y;
    }
    box *= b.value();
  }
  out.value = std::max(full - box, 0.0) * weight_mass(job);
  out.available = std::isfinite(out.value);
  return out;
}

}  // namespace detail

inline TailBound tail_bound(const HSJob& job, int K) {
  return detail::tail_bound_with(
      job, K, detail::compute_sup_info(job.phi, detail::geometry_of(job.source)));
}

// Sampling grid for the comparability sweep. The left endpoint stays away
// from 0: differentiation families have vanishing constant term, so the
// ratio h(x) = g(x)(1-x)^p degenerates to 0 there and the two-sided constants
// would collapse.
struct ComparabilityGrid {
  double x_min = 0.1;
  double x_max = 0.999;
  int count = 200;
};

// Extremes over the grid of h(x) = (sum_k c_k x^k) (1-x)^p: finite positive
// constants with c_lo * closed form <= series <= c_hi * closed form on the
// sampled range. Series summed to a 1e-14 relative ratio-test tail.
inline std::pair<double, double> comparability_constants(const SourceSpace& source,
                                                         const OperatorKind& op,
                                                         const ComparabilityGrid& grid = {}) {
  if (!is_ball(source.kind))
    throw UnsupportedSpace("comparability constants require a collapsed series");
  if (!(grid.x_min > 0.0 && grid.x_min <= grid.x_max && grid.x_max < 1.0))
    throw ValidationError("comparability grid must satisfy 0 < x_min <= x_max < 1");
  if (grid.count < 2) throw ValidationError("comparability grid needs at least 2 points");

  const double p = closed_form_exponent(source, op).value;
  std::vector<double> coeff;
  auto coeff_at = [&](std::size_t k) {
    while (coeff.size() <= k)
      coeff.push_back(collapsed_coefficient(source, op, coeff.size()));
    return coeff[k];
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int s = 0; s < grid.count; ++s) {
    const double x = grid.x_min + (grid.x_max - grid.x_min) * static_cast<double>(s) /
                                      static_cast<double>(grid.count - 1);
    CompensatedSum g;
    double xp = 1.0;
    for (std::size_t k = 0;; ++k) {
      const double ck = coeff_at(k);
      g.add(ck * xp);
      xp *= x;
      if (k >= 1 && ck > 0.0) {
        const double r = collapsed_ratio(source, op, k) * x;
        if (r < 1.0 && ck * xp * r / (1.0 - r) <= 1e-14 * g.value()) break;
      }
      if (k > 2000000) break;  // defensive; unreachable for x_max < 1 in practice
    }
    const double h = g.value() * std::pow(1.0 - x, p);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

enum class Verdict { ExactMatch, ComparableBounded, Diverged, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExactMatch:        return "exact_match";
    case Verdict::ComparableBounded: return "comparable_bounded";
    case Verdict::Diverged:          return "diverged";
    case Verdict::Inconclusive:      return "inconclusive";
  }
  return "inconclusive";
}

struct HSReport {
  std::vector<double> partial_sums;
  CharacterizationValue characterization;
  TailBound tail;
  bool exact_family = false;
  std::optional<std::pair<double, double>> comparability;  // absent for exact families
  Verdict verdict = Verdict::Inconclusive;
  double sup_phi = 0.0;
  int rule_m = 1;
  double rule_beta = 0.0;
  int rule_radial = 0;
  int rule_angular = 0;
};

// Full pipeline: sup estimate, optional rule refinement, truncated sums,
// closed form, tail bound, comparability constants, verdict.
inline HSReport verify(const HSJob& job_in) {
  HSJob job = job_in;
  const auto geometry = detail::geometry_of(job.source);
  const auto sup = detail::compute_sup_info(job.phi, geometry);
  const double delta = job.tol.boundary_delta;
  const bool interior = sup.raw < 1.0 - delta;

  // Refinement: double the rule until the closed form stops moving. Only for
  // one-variable domains; a tensor probe at doubled resolution costs more
  // than the verification itself.
  if (interior && job.rule.m == 1) {
    while (static_cast<int>(job.rule.axis.radial_x.size()) < 512) {
      const int r2 = std::min(512, 2 * static_cast<int>(job.rule.axis.radial_x.size()));
      const int a2 = std::min(1024, 2 * job.rule.axis.angular);
      HSJob probe = job;
      probe.rule = build_polydisk_rule(job.rule.axis.beta, 1, r2, a2);
      const double i1 = detail::characterization_with(job, sup).value;
      const double i2 = detail::characterization_with(probe, sup).value;
      if (std::abs(i1 - i2) <= 1e-9 * std::max(std::abs(i2), 1e-300)) break;
      job.rule = probe.rule;
    }
  }

  HSReport rep;
  rep.sup_phi = sup.raw;
  rep.rule_m = job.rule.m;
  rep.rule_beta = job.rule.axis.beta;
  rep.rule_radial = static_cast<int>(job.rule.axis.radial_x.size());
  rep.rule_angular = job.rule.axis.angular;
  rep.exact_family = is_exact_theorem(job.source, job.op);

  rep.partial_sums = hs_sum_truncated(job);
  rep.characterization = detail::characterization_with(job, sup);
  rep.tail = interior ? detail::tail_bound_with(job, job.truncation, sup)
                      : TailBound{};
  if (!rep.exact_family)
    rep.comparability = comparability_constants(job.source, job.op);

  const auto& S = rep.partial_sums;
  const double s_last = S.back();
  double inc_last = 0.0;
  if (S.size() >= 2) inc_last = s_last - S[S.size() - 2];
  if (S.size() >= 3) inc_last = std::max(inc_last, S[S.size() - 2] - S[S.size() - 3]);
  const bool shrinking = inc_last <= 1e-6 * std::max(s_last, 1.0);
  const bool capped = s_last > job.tol.divergence_cap;

  if (!rep.characterization.finite) {
    // At the boundary with steady increments the sum provably runs away; in
    // the near-boundary band nothing can be certified either way.
    const bool at_boundary = sup.raw >= 1.0 - 1e-9;
    rep.verdict = ((at_boundary && !shrinking) || capped) ? Verdict::Diverged
                                                          : Verdict::Inconclusive;
    return rep;
  }

  const double I = rep.characterization.value;
  if (rep.exact_family) {
    if (rep.tail.available &&
        std::abs(s_last + 0.5 * rep.tail.value - I) <=
            std::max(job.tol.rel * I, rep.tail.value))
      rep.verdict = Verdict::ExactMatch;
    return rep;
  }

  const auto [c_lo, c_hi] = *rep.comparability;
  if (rep.tail.available) {
    const double s_est = s_last + 0.5 * rep.tail.value;
    if (s_est >= c_lo * I * (1.0 - 1e-6) && s_est <= c_hi * I * (1.0 + 1e-6))
      rep.verdict = Verdict::ComparableBounded;
  }
  return rep;
}

}  // namespace hsco
