#pragma once

// Series helpers for the pure-Pareto degree law.

namespace nullmodels::special {

// Hurwitz zeta  sum_{k>=0} (k + a)^{-s}  for s > 1, a >= 1.
// Direct summation of the first `terms` terms followed by an Euler-Maclaurin
// tail (integral, half term and two Bernoulli corrections). Absolute error
// far below 1e-12 once terms + a >= 1e3.
double hurwitz_zeta(double s, double a, long terms = 1'000'000);

// Riemann zeta for s > 1.
inline double zeta(double s, long terms = 1'000'000) { return hurwitz_zeta(s, 1.0, terms); }

}  // namespace nullmodels::special
