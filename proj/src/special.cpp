#include "nullmodels/special.hpp"

#include <cmath>

#include "nullmodels/error.hpp"

namespace nullmodels::special {

double hurwitz_zeta(double s, double a, long terms) {
  if (!(s > 1.0) || !(a > 0.0)) throw InvalidInput("hurwitz_zeta: need s > 1 and a > 0");
  if (terms < 10) terms = 10;
  // Sum smallest terms last for accuracy.
  double head = 0.0;
  for (long k = terms - 1; k >= 0; --k) head += std::pow(static_cast<double>(k) + a, -s);
  // Euler-Maclaurin for sum_{k>=terms} f(k + a), f(x) = x^{-s}:
  //   int_N^inf f + f(N)/2 - f'(N)/12 + f'''(N)/720
  const double x = static_cast<double>(terms) + a;
  const double f = std::pow(x, -s);
  const double integral = x * f / (s - 1.0);
  const double d1 = -s * f / x;
  const double d3 = -s * (s + 1.0) * (s + 2.0) * f / (x * x * x);
  return head + integral + 0.5 * f - d1 / 12.0 + d3 / 720.0;
}

}  // namespace nullmodels::special
