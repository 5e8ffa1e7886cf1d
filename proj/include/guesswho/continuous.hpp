#pragma once

#include "guesswho/game.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace guesswho {

enum class ContinuousKind { Weeds, UpperHand };

// x = 2^level * alpha, y = 2^level * beta with
//   Weeds:     alpha in (2, inf), beta in (1, 2]
//   UpperHand: alpha in (1, 2],   beta in (1, inf)
struct ContinuousRegion {
  ContinuousKind kind;
  int level;
  double alpha;
  double beta;
};

struct FairnessResult {
  double beta;
  double fair_factor;
};

namespace detail {

// Unique k with v / 2^k in (1, 2]. Exact for every positive finite double.
inline int unit_interval_level(double v) {
  int e = 0;
  double f = std::frexp(v, &e);  // v = f * 2^e, f in [0.5, 1)
  return f == 0.5 ? e - 2 : e - 1;
}

inline void check_positive(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw GameError("continuous pools must be positive and finite");
  }
}

}  // namespace detail

// Decomposition valid on all of (0, inf)^2; the dynamics of the continuous
// game visit pools below 1, so simulation uses this form.
inline ContinuousRegion decompose_any(double x, double y) {
  detail::check_positive(x, y);
  int k = detail::unit_interval_level(y);
  double alpha = std::ldexp(x, -k);
  if (alpha > 2.0) return {ContinuousKind::Weeds, k, alpha, std::ldexp(y, -k)};
  k = detail::unit_interval_level(x);
  return {ContinuousKind::UpperHand, k, std::ldexp(x, -k), std::ldexp(y, -k)};
}

inline ContinuousRegion decompose(double x, double y) {
  detail::check_positive(x, y);
  if (!(x > 1.0) || !(y > 1.0)) throw GameError("continuous pools must exceed 1");
  return decompose_any(x, y);
}

inline double p_infinity(double x, double y) {
  ContinuousRegion r = decompose(x, y);
  if (r.kind == ContinuousKind::Weeds) {
    return 2.0 / r.alpha - (2.0 / 3.0) * 2.0 / (r.alpha * r.beta);
  }
  return 1.0 - 1.0 / r.beta + (2.0 / 3.0) / (r.alpha * r.beta);
}

// Same value in exact arithmetic at integer pools. The continuous and
// discrete region levels coincide at integer points.
inline Rational p_infinity_exact(Count n, Count m) {
  if (n < 2 || m < 2) throw GameError("continuous pools must exceed 1");
  Region r = classify(n, m);
  unsigned k = static_cast<unsigned>(*r.level);
  Rational nm = Rational(n) * Rational(m);
  if (r.kind == RegionKind::Weeds) {
    return Rational::pow2(k + 1) / Rational(n) - Rational(2, 3) * Rational::pow2(2 * k + 1) / nm;
  }
  return Rational(1) - Rational::pow2(k) / Rational(m) + Rational(2, 3) * Rational::pow2(2 * k) / nm;
}

// Chance that a player in the weeds with scaled pool alpha ever escapes when
// both sides follow bold/halving play.
inline double escape_probability(double alpha) {
  if (!(alpha > 2.0)) throw GameError("escape probability needs alpha > 2");
  return 2.0 / alpha;
}

// Finite-size gap between the discrete and continuous values:
// -2/(3nm) in the weeds, +4/(3nm) with the upper hand.
inline Rational expected_correction(Count n, Count m) {
  Region r = classify(n, m);
  if (r.terminal()) throw GameError("correction is defined for n, m >= 2");
  Rational inv = Rational(1, 3) / (Rational(n) * Rational(m));
  return r.kind == RegionKind::Weeds ? Rational(-2) * inv : Rational(4) * inv;
}

struct CorrectionTerm {
  Rational difference;  // p* - p_inf
  Rational expected;
  bool holds() const { return difference == expected; }
};

inline CorrectionTerm correction_identity(Count n, Count m, const Rational& optimal_value) {
  if (n < 2 || m < 2) throw GameError("correction is defined for n, m >= 2");
  return {optimal_value - p_infinity_exact(n, m), expected_correction(n, m)};
}

inline CorrectionTerm correction_identity(Count n, Count m) {
  return correction_identity(n, m, closed_form_value(n, m));
}

// First-mover advantage with equal pools x = 2^k alpha.
inline double equal_pool_advantage(double alpha) {
  if (!(alpha > 1.0) || !(alpha <= 2.0)) throw GameError("alpha must lie in (1, 2]");
  return 1.0 - 1.0 / alpha + (2.0 / 3.0) / (alpha * alpha);
}

// Factor c by which the first mover's pool must grow so that
// p_inf(c*beta, beta) = 1/2. Bisection on [1, 3]; p_inf decreases in c.
inline FairnessResult fair_factor(double beta, double tol = 1e-12) {
  if (!(beta > 1.0) || !(beta <= 2.0)) throw GameError("beta must lie in (1, 2]");
  auto excess = [beta](double c) { return p_infinity(c * beta, beta) - 0.5; };
  double lo = 1.0;
  double hi = 3.0;
  if (!(excess(lo) > 0.0) || !(excess(hi) < 0.0)) {
    throw GameError("fair factor root not bracketed for beta " + std::to_string(beta));
  }
  while (hi - lo > tol * 0.25) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return {beta, 0.5 * (lo + hi)};
}

}  // namespace guesswho
