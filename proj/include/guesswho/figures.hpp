#pragma once

#include "guesswho/continuous.hpp"
#include "guesswho/solver.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace guesswho {

// 12 significant digits, the decimal companion of every exact fraction.
inline std::string decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Optimal win probability over 1..max_n x 1..max_m from the stage DP.
// Columns: n,m,p,p_frac. The undefined state (1,1) has empty value fields.
inline void write_heatmap_csv(std::ostream& os, Count max_n, Count max_m) {
  if (max_n < 1 || max_m < 1) throw GameError("heatmap bounds must be >= 1");
  SolveTable t = solve_dp(std::max<Count>(max_n + max_m, 3));
  os << "n,m,p,p_frac\n";
  for (Count n = 1; n <= max_n; ++n) {
    for (Count m = 1; m <= max_m; ++m) {
      os << n << ',' << m << ',';
      if (n == 1 && m == 1) {
        os << ",\n";
        continue;
      }
      const Rational& p = t.value(n, m);
      os << decimal(p.to_double()) << ',' << p.str() << '\n';
    }
  }
}

struct ContinuousGrid {
  double alpha_max = 8.0;
  double beta_max = 8.0;
  int alpha_steps = 140;
  int beta_steps = 140;
};

// p_inf over the L-shaped fundamental region (alpha > 2, beta in (1,2]) or
// (alpha in (1,2], beta > 1), sampled at 1 + i*(max-1)/steps. Columns: x,y,p_infinity.
inline void write_continuous_heatmap_csv(std::ostream& os, const ContinuousGrid& g) {
  if (!(g.alpha_max > 1.0) || !(g.beta_max > 1.0) || g.alpha_steps < 1 || g.beta_steps < 1) {
    throw GameError("continuous grid needs maxima > 1 and positive step counts");
  }
  os << "x,y,p_infinity\n";
  for (int i = 1; i <= g.alpha_steps; ++i) {
    double alpha = 1.0 + (g.alpha_max - 1.0) * i / g.alpha_steps;
    for (int j = 1; j <= g.beta_steps; ++j) {
      double beta = 1.0 + (g.beta_max - 1.0) * j / g.beta_steps;
      bool in_region = (alpha > 2.0 && beta <= 2.0) || alpha <= 2.0;
      if (!in_region) continue;
      os << decimal(alpha) << ',' << decimal(beta) << ',' << decimal(p_infinity(alpha, beta)) << '\n';
    }
  }
}

// Fair handicap factor at beta = 1 + i/steps, i = 1..steps. Columns: beta,c.
inline void write_fairness_csv(std::ostream& os, int steps) {
  if (steps < 1) throw GameError("fairness grid needs at least one point");
  os << "beta,c\n";
  for (int i = 1; i <= steps; ++i) {
    double beta = 1.0 + static_cast<double>(i) / steps;
    os << decimal(beta) << ',' << decimal(fair_factor(beta).fair_factor) << '\n';
  }
}

}  // namespace guesswho
