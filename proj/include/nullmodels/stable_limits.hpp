#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nullmodels {

// Powers p whose Gamma-series S_{gamma/p} = sum_i Gamma_i^{-p/gamma} are
// sampled jointly. Index k of every per-power array refers to kPowers[k].
inline constexpr std::array<int, 4> kPowers{2, 3, 4, 6};

// Fills its argument with i.i.d. unit-mean exponential spacings.
using SpacingSource = std::function<void(std::span<double>)>;

// Gamma_1 < ... < Gamma_N, partial sums of the spacings.
struct GammaSeries {
  std::vector<double> values;
  std::size_t truncation = 0;
  std::uint64_t seed = 0;
};

GammaSeries gamma_series(std::size_t truncation, std::uint64_t seed);
GammaSeries gamma_series(std::size_t truncation, const SpacingSource& spacings);

// Composed limit variables for one draw of the Gamma sequence.
struct ComposedLimits {
  double pearson_ecm = 0.0;           // -S2^2 / S3
  double clustering_cm = 0.0;         // (S2^2 - 3 S4 + 2 S6/S2) / mu^3
  double clustering_cm_ctilde = 0.0;  // same with the C~_{gamma/p} weights
  double clustering_ecm = 0.0;        // mu^{-3 gamma/2} A_gamma / S2
};

struct LimitSample {
  // S_{gamma/p} for p in kPowers, from one shared Gamma sequence, tail
  // correction included.
  std::array<double, 4> s{};
  // Continuum tail Gamma_N^{1-a}/(a-1), a = p/gamma, added to s.
  std::array<double, 4> tail_correction{};
  ComposedLimits composed;

  double s_of(int p) const;
};

// Parameters of the composed limits: the law's mean and A_gamma.
struct LimitModel {
  double gamma = 1.5;
  double mu = 1.0;
  double a_gamma = 0.0;
};

struct LimitSamplerConfig {
  double gamma = 1.5;
  std::size_t truncation = 100'000;
  // When set, the analytic tail bound at p = 2 must not exceed it.
  std::optional<double> tolerance;
};

// Bound on |sum_{i>N} Gamma_i^{-a} - Gamma_N^{1-a}/(a-1)|: the
// Euler-Maclaurin discretisation term plus six standard deviations of the
// Poisson fluctuation of the remainder.
double limit_tail_bound(double gamma_n, double a);

// One joint draw. Throws ConfigurationError if truncation < 100 or the
// tail bound exceeds the tolerance, InvalidInput if gamma is not in (1,2).
LimitSample sample_limit(const LimitSamplerConfig& config, const LimitModel& model, std::uint64_t seed);
LimitSample sample_limit(const LimitSamplerConfig& config, const LimitModel& model, const SpacingSource& spacings);

// `count` independent draws; draw k uses stream (seed, k). The result does
// not depend on `threads`.
std::vector<LimitSample> sample_limits(const LimitSamplerConfig& config, const LimitModel& model, std::size_t count,
                                       std::uint64_t seed, unsigned threads = 1);

struct StableConstants {
  double c_hat = 0.0;    // (1 - alpha) / (Gamma(2 - alpha) cos(pi alpha / 2))
  double c_tilde = 0.0;  // c_hat^alpha
};

// 0 < alpha < 1; the removable singularity at alpha -> 1 is evaluated in
// the stable form (1-alpha)/sin(pi(1-alpha)/2).
StableConstants stable_constant(double alpha);

enum class NormingConvention {
  // a_{n,p} = (c n)^{p/gamma}: the Gamma-series (LePage) normalisation under
  // which sum_i D_i^p / a_{n,p} -> S_{gamma/p} for a pure Pareto tail.
  lepage,
  // a_{n,p} = C^_{gamma/p}^{p/gamma} (c n)^{p/gamma}: the stable-CLT
  // parametrisation with the explicit constant.
  stable_clt,
};

// Norming of sum_i D_i^p. Requires p >= 2 so that p/gamma > 1.
double normalized_degree_sum_reference(double gamma, int p, double n, double scale = 1.0,
                                       NormingConvention convention = NormingConvention::lepage);

// Multipliers that turn a statistic into its rescaled form:
//   pearson:        mu c^{-1/gamma} n^{1-1/gamma}            -> -S2^2/S3
//   clustering_cm:  c^{-4/gamma} n^{3-4/gamma}               -> (S2^2-3S4+2S6/S2)/mu^3
//   clustering_ecm: c^{2/gamma} (gamma c)^{-3} n^{-e(gamma)} -> mu^{-3gamma/2} A/S2
// with e(gamma) = (-3 gamma^2 + 6 gamma - 4) / (2 gamma).
double pearson_rescale(double gamma, double mu, double n, double scale = 1.0);
double clustering_cm_rescale(double gamma, double n, double scale = 1.0);
double clustering_ecm_rescale(double gamma, double n, double scale = 1.0);
double clustering_ecm_exponent(double gamma);

}  // namespace nullmodels
