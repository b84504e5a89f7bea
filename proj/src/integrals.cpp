#include "nullmodels/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "nullmodels/error.hpp"
#include "nullmodels/simd.hpp"

namespace nullmodels {

namespace {

constexpr unsigned kPanelNodes = 8;
constexpr int kMaxLevel1d = 12;

// out[k] = q(e^{v[k]})
using QOfLog = std::function<void(const double*, double*, std::size_t)>;

QOfLog generic_q(const ConnectionKernel& kernel) {
  return [kernel](const double* v, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = kernel.q(std::exp(std::clamp(v[k], -745.0, 700.0)));
  };
}

QOfLog poisson_q() {
  return [](const double* v, double* out, std::size_t n) { simd::kernels().poisson_q_of_log(v, out, n); };
}

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Gauss-Legendre on [lo, hi] with panel edges on the lattice h Z.
Rule composite_rule(double lo, double hi, double h) {
  using G = boost::math::quadrature::gauss<double, kPanelNodes>;
  std::vector<double> edges{lo};
  for (double k = std::floor(lo / h) + 1; k * h < hi; ++k)
    if (k * h > lo) edges.push_back(k * h);
  edges.push_back(hi);

  Rule rule;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      // The stored abscissas are the nonnegative half; x = 0 appears once.
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
      if (x[i] != 0.0) {
        rule.nodes.push_back(mid - half * x[i]);
        rule.weights.push_back(half * w[i]);
      }
    }
  }
  return rule;
}

void check_gamma(double gamma) {
  if (!(gamma > 1.0 && gamma < 2.0)) throw InvalidInput("triple_integral: gamma must lie in (1,2)");
}

// sum_{i,j,k} W_i W_j W_k q(e^{s_i+t_j}) q(e^{s_i+u_k}) q(e^{t_j+u_k})
double tensor_sum(const Rule& rx, const Rule& ry, const Rule& rz, double gamma, const QOfLog& q) {
  const auto& k = simd::kernels();
  auto scaled = [gamma](const Rule& r) {
    std::vector<double> w(r.nodes.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.weights[i] * std::exp(-gamma * r.nodes[i]);
    return w;
  };
  auto matrix = [&q](const Rule& a, const Rule& b) {
    const std::size_t m = b.nodes.size();
    std::vector<double> out(a.nodes.size() * m), arg(m);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      for (std::size_t j = 0; j < m; ++j) arg[j] = a.nodes[i] + b.nodes[j];
      q(arg.data(), out.data() + i * m, m);
    }
    return out;
  };
  const auto wx = scaled(rx), wy = scaled(ry), wz = scaled(rz);
  const auto qxy = matrix(rx, ry), qxz = matrix(rx, rz), qyz = matrix(ry, rz);
  const std::size_t mx = wx.size(), my = wy.size(), mz = wz.size();

  double total = 0.0;
  for (std::size_t i = 0; i < mx; ++i) {
    double row = 0.0;
    const double* xz = qxz.data() + i * mz;
    for (std::size_t j = 0; j < my; ++j) {
      const double outer = wy[j] * qxy[i * my + j];
      if (outer == 0.0) continue;
      row += outer * k.weighted_dot3(wz.data(), xz, qyz.data() + j * mz, mz);
    }
    total += wx[i] * row;
  }
  return total;
}

TripleIntegralResult integrate_box(const TripleIntegralSpec& spec, const QOfLog& q) {
  std::array<double, 3> lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::log(spec.lower[a]);
    hi[a] = std::log(spec.upper[a]);
  }
  TripleIntegralResult result;
  double previous = 0.0;
  for (int level = 0;; ++level) {
    const double h = std::ldexp(1.0, -level);
    const Rule rx = composite_rule(lo[0], hi[0], h);
    const Rule ry = composite_rule(lo[1], hi[1], h);
    const Rule rz = composite_rule(lo[2], hi[2], h);
    const std::size_t nodes = std::max({rx.nodes.size(), ry.nodes.size(), rz.nodes.size()});
    if (nodes > spec.max_nodes) {
      if (level == 0) throw QuadratureError("triple_integral: box too large for the node budget", 0.0, INFINITY);
      throw QuadratureError("triple_integral: tolerance " + std::to_string(spec.tolerance) +
                                " not reached within " + std::to_string(spec.max_nodes) + " nodes per axis",
                            result.value, result.error);
    }
    const double value = tensor_sum(rx, ry, rz, spec.gamma, q);
    const double change = level == 0 ? 0.0 : std::abs(value - previous);
    result.table.push_back({level, nodes, value, change});
    result.value = value;
    result.error = level == 0 ? INFINITY : change;
    if (level > 0 && change <= spec.tolerance) return result;
    previous = value;
  }
}

// Full octant: A = 1/2 I^3, I = int e^{-gamma v/2} q(e^v) dv.
TripleIntegralResult integrate_octant(const TripleIntegralSpec& spec, const QOfLog& q) {
  const double g = spec.gamma;
  const double left_rate = 1.0 - g / 2.0, right_rate = g / 2.0;
  // The majorant min(e^v, 1) bounds I and both neglected tails.
  const double i_max = 1.0 / left_rate + 1.0 / right_rate;
  const double tol_i = spec.tolerance / (1.5 * i_max * i_max);
  const double tail_target = tol_i / 20.0;
  const double t_left = -std::log(tail_target * left_rate) / left_rate;
  const double t_right = -std::log(tail_target * right_rate) / right_rate;
  const double tail_bound =
      std::exp(-left_rate * t_left) / left_rate + std::exp(-right_rate * t_right) / right_rate;

  auto cube = [](double i) { return 0.5 * i * i * i; };
  TripleIntegralResult result;
  double previous = 0.0;
  for (int level = 0; level <= kMaxLevel1d; ++level) {
    const Rule r = composite_rule(-t_left, t_right, std::ldexp(1.0, -level));
    std::vector<double> qv(r.nodes.size());
    q(r.nodes.data(), qv.data(), qv.size());
    double integral = 0.0;
    for (std::size_t k = 0; k < qv.size(); ++k) integral += r.weights[k] * std::exp(-right_rate * r.nodes[k]) * qv[k];

    const double value = cube(integral);
    const double change = level == 0 ? 0.0 : std::abs(value - previous);
    result.table.push_back({level, r.nodes.size(), value, change});
    result.value = value;
    result.truncation_error = cube(integral + tail_bound) - value;
    result.error = level == 0 ? INFINITY : change + result.truncation_error;
    if (level > 0 && result.error <= spec.tolerance) return result;
    previous = value;
  }
  throw QuadratureError("triple_integral: tolerance not reached", result.value, result.error);
}

TripleIntegralResult dispatch(const TripleIntegralSpec& spec, const QOfLog& q) {
  check_gamma(spec.gamma);
  if (!(spec.tolerance > 0.0)) throw InvalidInput("triple_integral: tolerance must be positive");
  if (spec.truncated()) {
    for (int a = 0; a < 3; ++a)
      if (!(spec.lower[a] > 0.0 && spec.lower[a] < spec.upper[a] && std::isfinite(spec.upper[a])))
        throw InvalidInput("triple_integral: truncated box needs 0 < lower < upper < inf on every axis");
    return integrate_box(spec, q);
  }
  for (int a = 0; a < 3; ++a)
    if (spec.lower[a] != 0.0 || !std::isinf(spec.upper[a]))
      throw InvalidInput("triple_integral: mix of truncated and untruncated axes is not supported");
  return integrate_octant(spec, q);
}

}  // namespace

void TripleIntegralSpec::truncate(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("truncate: epsilon must lie in (0,1)");
  lower.fill(epsilon);
  upper.fill(1.0 / epsilon);
}

bool TripleIntegralSpec::truncated() const {
  return std::any_of(lower.begin(), lower.end(), [](double v) { return v != 0.0; }) ||
         std::any_of(upper.begin(), upper.end(), [](double v) { return std::isfinite(v); });
}

TripleIntegralResult triple_integral(const TripleIntegralSpec& spec) { return dispatch(spec, generic_q(spec.kernel)); }

TripleIntegralResult a_gamma(double gamma, double tolerance, double epsilon) {
  TripleIntegralSpec spec;
  spec.gamma = gamma;
  spec.tolerance = tolerance;
  if (epsilon > 0.0) spec.truncate(epsilon);
  return dispatch(spec, poisson_q());
}

double karamata_reference(double gamma, double t, double scale) {
  check_gamma(gamma);
  if (!(t > 1.0)) throw InvalidInput("karamata_reference: t must exceed 1");
  return gamma / ((gamma - 1.0) * (2.0 - gamma)) * scale * std::pow(t, 1.0 - gamma);
}

}  // namespace nullmodels
