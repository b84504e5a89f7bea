#pragma once

#include <array>
#include <limits>
#include <vector>

#include "nullmodels/generators.hpp"

namespace nullmodels {

// Integral of (xyz)^{-gamma-1} q(xy) q(xz) q(yz) over a box.
//
// Either every axis is untruncated (lower 0, upper infinity) or every axis
// has finite positive bounds; mixed boxes are rejected.
struct TripleIntegralSpec {
  double gamma = 1.5;
  ConnectionKernel kernel = ConnectionKernel::poisson();
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity()};
  double tolerance = 1e-4;
  // Budget: largest number of quadrature nodes per axis in the 3D rule.
  std::size_t max_nodes = 1024;

  // Cube [epsilon, 1/epsilon]^3.
  void truncate(double epsilon);
  bool truncated() const;
};

struct ConvergenceRow {
  int level = 0;
  std::size_t nodes = 0;  // per axis
  double value = 0.0;
  double change = 0.0;    // |value - previous level's value|, 0 on the first row
};

struct TripleIntegralResult {
  double value = 0.0;
  double error = 0.0;             // refinement difference + truncation bound
  double truncation_error = 0.0;  // bound on the mass outside the integration box
  std::vector<ConvergenceRow> table;
};

// Log substitution x = e^s. Finite boxes use a tensor composite
// Gauss-Legendre rule refined until two levels agree within tolerance. The
// full octant uses the change of variables a = s+t, b = s+u, c = t+u (Jacobian
// 1/2), under which the integrand is a product of three copies of
// e^{-gamma v/2} q(e^v); tails are cut where the q <= min(u,1) majorant bounds
// them below tolerance/10. Throws QuadratureError (with the best value) when
// the budget is exhausted, InvalidInput for gamma outside (1,2) or bad boxes.
TripleIntegralResult triple_integral(const TripleIntegralSpec& spec);

// A_gamma for q(u) = 1 - e^{-u}, through the vectorised kernel path.
// epsilon = 0 integrates the full octant.
TripleIntegralResult a_gamma(double gamma, double tolerance = 1e-4, double epsilon = 0.0);

// gamma/((gamma-1)(2-gamma)) * scale * t^{1-gamma}, the large-t behaviour of
// E[D min(1, D/t)] for a pure-Pareto tail. Requires t > 1.
double karamata_reference(double gamma, double t, double scale = 1.0);

}  // namespace nullmodels
