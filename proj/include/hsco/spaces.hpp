#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "hsco/errors.hpp"
#include "hsco/multi_index.hpp"

namespace hsco {

enum class SpaceKind { BergmanBall, HardyBall, BergmanPolydisk, HardyPolydisk };

inline bool is_ball(SpaceKind k) {
  return k == SpaceKind::BergmanBall || k == SpaceKind::HardyBall;
}
inline bool is_bergman(SpaceKind k) {
  return k == SpaceKind::BergmanBall || k == SpaceKind::BergmanPolydisk;
}

// Source function space: weighted Bergman or Hardy space over the unit ball
// or unit polydisk in C^n. alpha is the Bergman weight exponent and is
// ignored by the Hardy kinds.
struct SourceSpace {
  SpaceKind kind;
  int n = 1;
  double alpha = 0.0;

  SourceSpace(SpaceKind k, int dim, double a = 0.0) : kind(k), n(dim), alpha(a) {
    if (n < 1) throw ValidationError("source dimension must be at least 1");
    if (is_bergman(kind) && !(alpha > -1.0))
      throw InvalidWeight("Bergman weight exponent must exceed -1");
  }
};

enum class OperatorFamily { Composition, RadialCompDiff, OneVarDerivative };

// Operator applied before weighting by psi. t orders the degree-scaling
// derivative in RadialCompDiff (t = 1 is the plain radial derivative) and is
// ignored by the other families.
struct OperatorKind {
  OperatorFamily family = OperatorFamily::Composition;
  double t = 1.0;
};

// Weight exponent of the target disk measure that makes the degree-slice
// integrals match the source norms. Rejects pairings that land at or below
// the integrability edge (Hardy sources with n = 1).
inline double target_beta(const SourceSpace& s) {
  double beta = 0.0;
  switch (s.kind) {
    case SpaceKind::BergmanPolydisk: beta = s.n * (s.alpha + 2.0) - 2.0; break;
    case SpaceKind::HardyPolydisk:   beta = s.n - 2.0; break;
    case SpaceKind::HardyBall:       beta = s.n - 2.0; break;
    case SpaceKind::BergmanBall:     beta = s.n - 1.0 + s.alpha; break;
  }
  if (!(beta > -1.0))
    throw InvalidWeight("target weight exponent " + std::to_string(beta) +
                        " is not integrable; this source has no disk model");
  return beta;
}

// log of the squared normalizing constant of the monomial basis vector e_J,
// i.e. of 1 / ||z^J||^2 in the source space.
inline double log_basis_constant_sq(const SourceSpace& s, const MultiIndex& J) {
  if (static_cast<int>(J.size()) != s.n)
    throw DimensionMismatch("multi-index arity differs from source dimension");
  const double k = static_cast<double>(J.degree());
  switch (s.kind) {
    case SpaceKind::BergmanBall:
      return std::lgamma(s.n + k + s.alpha + 1.0) - J.log_factorial() -
             std::lgamma(s.n + s.alpha + 1.0);
    case SpaceKind::HardyBall:
      return std::lgamma(s.n + k) - std::lgamma(static_cast<double>(s.n)) - J.log_factorial();
    case SpaceKind::HardyPolydisk:
      return 0.0;
    case SpaceKind::BergmanPolydisk: {
      double acc = 0.0;
      for (std::size_t i = 0; i < J.size(); ++i) {
        const double j = static_cast<double>(J[i]);
        acc += std::lgamma(j + s.alpha + 2.0) - std::lgamma(j + 1.0) -
               std::lgamma(s.alpha + 2.0);
      }
      return acc;
    }
  }
  return 0.0;
}

inline double basis_constant_sq(const SourceSpace& s, const MultiIndex& J) {
  return std::exp(log_basis_constant_sq(s, J));
}

namespace detail {

[[noreturn]] inline void no_collapse_for_polydisk() {
  throw UnsupportedSpace(
      "degree-collapsed coefficients exist only for ball sources; polydisk "
      "sums do not collapse through a single power");
}

}  // namespace detail

// Coefficient c_k of x^k in the degree-collapsed squared-norm series: the sum
// of c_J^2 (times the operator's degree factor) over |J| = k, after the
// multinomial identity folds it onto ||phi||^(2k). Ball sources only.
inline double collapsed_coefficient(const SourceSpace& s, const OperatorKind& op,
                                    std::uint64_t k) {
  const double kd = static_cast<double>(k);
  switch (op.family) {
    case OperatorFamily::Composition:
    case OperatorFamily::RadialCompDiff: {
      if (!is_ball(s.kind)) detail::no_collapse_for_polydisk();
      double lg;
      if (s.kind == SpaceKind::BergmanBall)
        lg = std::lgamma(kd + s.n + s.alpha + 1.0) - std::lgamma(s.n + s.alpha + 1.0) -
             std::lgamma(kd + 1.0);
      else
        lg = std::lgamma(kd + s.n) - std::lgamma(static_cast<double>(s.n)) -
             std::lgamma(kd + 1.0);
      if (op.family == OperatorFamily::RadialCompDiff) {
        if (k == 0) return 0.0;  // the degree-scaling derivative kills constants
        lg += 2.0 * op.t * std::log(kd);
      }
      return std::exp(lg);
    }
    case OperatorFamily::OneVarDerivative: {
      if (s.kind != SpaceKind::BergmanBall || s.n != 1)
        throw UnsupportedPairing(
            "the one-variable derivative form is defined on weighted Bergman "
            "spaces of the disk only");
      return std::exp(std::log(kd + 1.0) + std::lgamma(kd + s.alpha + 3.0) -
                      std::lgamma(kd + 1.0) - std::lgamma(s.alpha + 2.0));
    }
  }
  detail::no_collapse_for_polydisk();
}

// Closed-form ratio c_{k+1}/c_k. Decreasing in k for every supported family,
// which is what lets a single evaluation at k = K+1 bound the whole tail.
inline double collapsed_ratio(const SourceSpace& s, const OperatorKind& op,
                              std::uint64_t k) {
  const double kd = static_cast<double>(k);
  switch (op.family) {
    case OperatorFamily::Composition:
    case OperatorFamily::RadialCompDiff: {
      if (!is_ball(s.kind)) detail::no_collapse_for_polydisk();
      const double top =
          (s.kind == SpaceKind::BergmanBall) ? kd + s.n + s.alpha + 1.0 : kd + s.n;
      double r = top / (kd + 1.0);
      if (op.family == OperatorFamily::RadialCompDiff) {
        if (k == 0)
          throw ValidationError("coefficient ratio from degree 0 is undefined here");
        r *= std::pow((kd + 1.0) / kd, 2.0 * op.t);
      }
      return r;
    }
    case OperatorFamily::OneVarDerivative:
      return (kd + 2.0) * (kd + s.alpha + 3.0) / ((kd + 1.0) * (kd + 1.0));
  }
  detail::no_collapse_for_polydisk();
}

// Exponent of the closed-form characterization integrand. Ball sources get a
// single power of 1 - ||phi||^2; polydisk sources get one power per factor of
// prod (1 - |phi_i|^2).
struct CharacterizationExponent {
  bool per_factor = false;
  double value = 0.0;
};

inline CharacterizationExponent closed_form_exponent(const SourceSpace& s,
                                                     const OperatorKind& op) {
  switch (op.family) {
    case OperatorFamily::Composition:
      switch (s.kind) {
        case SpaceKind::BergmanPolydisk: return {true, s.alpha + 2.0};
        case SpaceKind::HardyPolydisk:   return {true, 1.0};
        case SpaceKind::HardyBall:       return {false, static_cast<double>(s.n)};
        case SpaceKind::BergmanBall:     return {false, s.n + s.alpha + 1.0};
      }
      break;
    case OperatorFamily::RadialCompDiff:
      if (!is_ball(s.kind))
        throw UnsupportedPairing(
            "no characterization in scope for the radial composition-"
            "differentiation operator on polydisk sources");
      if (s.kind == SpaceKind::BergmanBall) return {false, s.n + s.alpha + 2.0 * op.t + 1.0};
      return {false, s.n + 2.0 * op.t};
    case OperatorFamily::OneVarDerivative:
      if (s.kind != SpaceKind::BergmanBall || s.n != 1)
        throw UnsupportedPairing(
            "the one-variable derivative form is defined on weighted Bergman "
            "spaces of the disk only");
      return {false, 4.0 + s.alpha};
  }
  throw UnsupportedPairing("no characterization in scope for this pairing");
}

// Whether the truncated sum converges to the closed form exactly (equality
// theorems) rather than up to two-sided comparability constants.
inline bool is_exact_theorem(const SourceSpace& s, const OperatorKind& op) {
  (void)s;
  return op.family == OperatorFamily::Composition;
}

// Job-level pairing admissibility; throws where no theorem is in scope.
inline void validate_pairing(const SourceSpace& s, const OperatorKind& op) {
  (void)closed_form_exponent(s, op);
  (void)target_beta(s);
  if (op.family == OperatorFamily::RadialCompDiff && !(op.t >= 0.0))
    throw ValidationError("derivative order t must be nonnegative");
}

}  // namespace hsco
