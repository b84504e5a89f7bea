#include "nullmodels/stable_limits.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nullmodels/error.hpp"
#include "nullmodels/rng.hpp"
#include "nullmodels/simd.hpp"
#include "parallel.hpp"

namespace nullmodels {

namespace {

constexpr std::size_t kChunk = 4096;

void check_gamma(double gamma) {
  if (!(gamma > 1.0 && gamma < 2.0)) throw InvalidInput("gamma must lie in (1,2), got " + std::to_string(gamma));
}

SpacingSource rng_spacings(Rng& rng) {
  return [&rng](std::span<double> out) {
    for (double& x : out) x = rng.uniform_open();
    simd::kernels().log(out.data(), out.data(), out.size());
    for (double& x : out) x = -x;
  };
}

void check_config(const LimitSamplerConfig& config) {
  check_gamma(config.gamma);
  if (config.truncation < 100) throw ConfigurationError("limit sampler: truncation must be at least 100");
  if (config.tolerance) {
    const double bound = limit_tail_bound(static_cast<double>(config.truncation), 2.0 / config.gamma);
    if (bound > *config.tolerance)
      throw ConfigurationError("limit sampler: truncation " + std::to_string(config.truncation) +
                               " gives tail bound " + std::to_string(bound) + " above tolerance " +
                               std::to_string(*config.tolerance));
  }
}

}  // namespace

double LimitSample::s_of(int p) const {
  for (std::size_t k = 0; k < kPowers.size(); ++k)
    if (kPowers[k] == p) return s[k];
  throw InvalidInput("no S_{gamma/p} sampled for p = " + std::to_string(p));
}

GammaSeries gamma_series(std::size_t truncation, const SpacingSource& spacings) {
  GammaSeries g;
  g.truncation = truncation;
  g.values.resize(truncation);
  spacings(g.values);
  for (std::size_t i = 1; i < truncation; ++i) g.values[i] += g.values[i - 1];
  return g;
}

GammaSeries gamma_series(std::size_t truncation, std::uint64_t seed) {
  Rng rng(seed);
  GammaSeries g = gamma_series(truncation, rng_spacings(rng));
  g.seed = seed;
  return g;
}

double limit_tail_bound(double gamma_n, double a) {
  return std::pow(gamma_n, -a) + 6.0 * std::sqrt(std::pow(gamma_n, 1.0 - 2.0 * a) / (2.0 * a - 1.0));
}

namespace {

ComposedLimits compose(const std::array<double, 4>& s, const LimitModel& model) {
  const double s2 = s[0], s3 = s[1], s4 = s[2], s6 = s[3];
  const double g = model.gamma;
  const double mu3 = model.mu * model.mu * model.mu;
  const double t2 = stable_constant(g / 2.0).c_tilde;
  const double t4 = stable_constant(g / 4.0).c_tilde;
  const double t6 = stable_constant(g / 6.0).c_tilde;
  ComposedLimits c;
  c.pearson_ecm = -s2 * s2 / s3;
  c.clustering_cm = (s2 * s2 - 3.0 * s4 + 2.0 * s6 / s2) / mu3;
  c.clustering_cm_ctilde = (t2 * s2 * s2 - 3.0 * t4 * s4 + 2.0 * t6 * s6 / (t2 * s2)) / mu3;
  c.clustering_ecm = std::pow(model.mu, -1.5 * g) * model.a_gamma / s2;
  return c;
}

}  // namespace

LimitSample sample_limit(const LimitSamplerConfig& config, const LimitModel& model, const SpacingSource& spacings) {
  check_config(config);
  const auto& k = simd::kernels();
  std::array<double, 4> exponents{};
  for (std::size_t p = 0; p < 4; ++p) exponents[p] = kPowers[p] / config.gamma;

  std::array<double, 4> sums{};
  std::vector<double> buffer(kChunk);
  double running = 0.0;
  for (std::size_t done = 0; done < config.truncation;) {
    const std::size_t len = std::min(kChunk, config.truncation - done);
    std::span<double> chunk(buffer.data(), len);
    spacings(chunk);
    for (double& x : chunk) {
      running += x;
      x = running;
    }
    k.log(chunk.data(), chunk.data(), len);
    k.power_sums4(chunk.data(), len, exponents.data(), sums.data());
    done += len;
  }
  if (!(running > 0.0)) throw ConfigurationError("limit sampler: non-positive Gamma_N");

  LimitSample out;
  for (std::size_t p = 0; p < 4; ++p) {
    const double a = exponents[p];
    out.tail_correction[p] = std::pow(running, 1.0 - a) / (a - 1.0);
    out.s[p] = sums[p] + out.tail_correction[p];
  }
  out.composed = compose(out.s, model);
  return out;
}

LimitSample sample_limit(const LimitSamplerConfig& config, const LimitModel& model, std::uint64_t seed) {
  Rng rng(seed);
  return sample_limit(config, model, rng_spacings(rng));
}

std::vector<LimitSample> sample_limits(const LimitSamplerConfig& config, const LimitModel& model, std::size_t count,
                                       std::uint64_t seed, unsigned threads) {
  check_config(config);
  std::vector<LimitSample> out(count);
  detail::parallel_for(count, threads,
                       [&](std::size_t i) { out[i] = sample_limit(config, model, stream_seed(seed, i)); });
  return out;
}

StableConstants stable_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("stable_constant: alpha must lie in (0,1)");
  // cos(pi alpha / 2) = sin(pi (1 - alpha) / 2); the ratio has a finite limit 2/pi at alpha -> 1.
  const double beta = 1.0 - alpha;
  const double ratio = beta < 1e-8 ? 2.0 / std::numbers::pi : beta / std::sin(std::numbers::pi * beta / 2.0);
  StableConstants c;
  c.c_hat = ratio / std::tgamma(2.0 - alpha);
  c.c_tilde = std::pow(c.c_hat, alpha);
  return c;
}

double normalized_degree_sum_reference(double gamma, int p, double n, double scale, NormingConvention convention) {
  check_gamma(gamma);
  if (p < 2) throw InvalidInput("normalized_degree_sum_reference: p must be at least 2 (p/gamma > 1)");
  if (!(n > 0.0) || !(scale > 0.0)) throw InvalidInput("normalized_degree_sum_reference: n and scale must be positive");
  const double a = static_cast<double>(p) / gamma;
  double value = std::pow(scale * n, a);
  if (convention == NormingConvention::stable_clt) value *= std::pow(stable_constant(gamma / p).c_hat, a);
  return value;
}

double pearson_rescale(double gamma, double mu, double n, double scale) {
  return mu * std::pow(scale, -1.0 / gamma) * std::pow(n, 1.0 - 1.0 / gamma);
}

double clustering_cm_rescale(double gamma, double n, double scale) {
  return std::pow(scale, -4.0 / gamma) * std::pow(n, 3.0 - 4.0 / gamma);
}

double clustering_ecm_exponent(double gamma) { return (-3.0 * gamma * gamma + 6.0 * gamma - 4.0) / (2.0 * gamma); }

double clustering_ecm_rescale(double gamma, double n, double scale) {
  return std::pow(scale, 2.0 / gamma) * std::pow(gamma * scale, -3.0) * std::pow(n, -clustering_ecm_exponent(gamma));
}

}  // namespace nullmodels
