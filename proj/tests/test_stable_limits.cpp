#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "nullmodels/error.hpp"
#include "nullmodels/experiments.hpp"
#include "nullmodels/stable_limits.hpp"

using namespace nullmodels;

namespace {

const LimitModel kModel{1.5, 1.0 + boost::math::zeta(1.5), 56.4845};

double pearson_corr(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("gamma series") {
  const auto g = gamma_series(1000, 5);
  CHECK(g.values.size() == 1000);
  CHECK(g.values[0] > 0);
  for (std::size_t i = 1; i < g.values.size(); ++i) CHECK(g.values[i] > g.values[i - 1]);
  CHECK(g.values.back() / 1000.0 == doctest::Approx(1.0).epsilon(0.15));
  const auto unit = gamma_series(10, [](std::span<double> s) { std::fill(s.begin(), s.end(), 1.0); });
  CHECK(unit.values[9] == 10.0);
}

TEST_CASE("unit spacings reproduce zeta(2/gamma)") {
  const SpacingSource ones = [](std::span<double> s) { std::fill(s.begin(), s.end(), 1.0); };
  const LimitSamplerConfig config{1.5, 10'000, std::nullopt};
  const auto s = sample_limit(config, kModel, ones);
  const double zeta = boost::math::zeta(4.0 / 3.0);
  CHECK(zeta == doctest::Approx(3.6009).epsilon(1e-4));
  CHECK(std::abs(s.s_of(2) - zeta) <= limit_tail_bound(10'000.0, 4.0 / 3.0));
  // Deterministic spacings make the discretisation term the only error.
  CHECK(std::abs(s.s_of(2) - zeta) <= std::pow(10'000.0, -4.0 / 3.0));
  CHECK(std::abs(s.s_of(3) - boost::math::zeta(2.0)) <= std::pow(10'000.0, -2.0));
}

TEST_CASE("truncation refinement stays inside the tail bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = sample_limit({1.5, 10'000, std::nullopt}, kModel, seed);
    const auto b = sample_limit({1.5, 100'000, std::nullopt}, kModel, seed);
    const double gamma_n = gamma_series(10'000, seed).values.back();
    for (int p : kPowers)
      CHECK(std::abs(a.s_of(p) - b.s_of(p)) <= limit_tail_bound(gamma_n, p / 1.5) + 1e-12 * b.s_of(p));
  }
}

TEST_CASE("sampler configuration errors") {
  CHECK_THROWS_AS(sample_limit({1.5, 50, std::nullopt}, kModel, 1), ConfigurationError);
  CHECK_THROWS_AS(sample_limit({1.5, 1000, 1e-9}, kModel, 1), ConfigurationError);
  CHECK_THROWS_AS(sample_limit({2.0, 1000, std::nullopt}, kModel, 1), InvalidInput);
  CHECK_NOTHROW(sample_limit({1.5, 100'000, 0.1}, kModel, 1));
}

TEST_CASE("joint limit samples") {
  const LimitSamplerConfig config{1.5, 1000, std::nullopt};
  const auto samples = sample_limits(config, kModel, 100'000, 42, 1);
  std::vector<double> s2, s3, inv_small, inv_all, sq_small, sq_all;
  bool signs = true, positive = true, dominated = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& x = samples[i];
    signs = signs && x.composed.pearson_ecm < 0 && x.composed.clustering_ecm > 0;
    for (double v : x.s) positive = positive && v > 0;
    s2.push_back(x.s_of(2));
    s3.push_back(x.s_of(3));
    inv_all.push_back(1.0 / x.s_of(2));
    sq_all.push_back(x.s_of(2) * x.s_of(2));
    if (i < 10'000) inv_small.push_back(1.0 / x.s_of(2));
  }
  CHECK(signs);
  CHECK(positive);

  // S_{gamma/p} is at least its first term.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto first = gamma_series(1, stream_seed(42, seed)).values[0];
    const auto& x = samples[seed];
    for (int p : kPowers) dominated = dominated && x.s_of(p) >= std::pow(first, -p / 1.5) * (1 - 1e-12);
  }
  CHECK(dominated);

  auto mean = [](const std::vector<double>& v, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s / n;
  };
  CHECK(std::abs(mean(inv_small, inv_small.size()) / mean(inv_all, inv_all.size()) - 1.0) <= 0.05);
  // Heavy tail of S^2: running means keep growing.
  CHECK(mean(sq_all, sq_all.size()) > mean(sq_all, 1000));
  CHECK(pearson_corr(s2, s3) > 0.5);
}

TEST_CASE("sample_limits independent of thread count") {
  const LimitSamplerConfig config{1.3, 500, std::nullopt};
  const auto a = sample_limits(config, kModel, 64, 9, 1);
  const auto b = sample_limits(config, kModel, 64, 9, 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].s == b[i].s);
}

TEST_CASE("stable constants") {
  CHECK(stable_constant(0.5).c_hat == doctest::Approx(0.5 / (std::sqrt(std::numbers::pi) / 2 * std::cos(std::numbers::pi / 4))));
  CHECK(stable_constant(0.5).c_hat == doctest::Approx(0.79788).epsilon(1e-5));
  for (double a = 0.1; a < 0.9; a += 0.05) {
    const auto c = stable_constant(a);
    CHECK(c.c_hat > 0);
    CHECK(std::log(c.c_tilde) == doctest::Approx(a * std::log(c.c_hat)).epsilon(1e-12));
    const double direct = (1 - a) / (std::tgamma(2 - a) * std::cos(std::numbers::pi * a / 2));
    CHECK(c.c_hat == doctest::Approx(direct).epsilon(1e-12));
  }
  const auto near = stable_constant(1.0 - 1e-12);
  CHECK(std::isfinite(near.c_hat));
  CHECK(near.c_hat == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-6));
  CHECK_THROWS_AS(stable_constant(1.0), InvalidInput);
  CHECK_THROWS_AS(stable_constant(0.0), InvalidInput);
}

TEST_CASE("degree-sum normings") {
  const double chat = stable_constant(0.75).c_hat;
  CHECK(normalized_degree_sum_reference(1.5, 2, 1e4, 1.0, NormingConvention::stable_clt) ==
        doctest::Approx(std::pow(chat, 4.0 / 3.0) * std::pow(10.0, 16.0 / 3.0)).epsilon(1e-12));
  CHECK(normalized_degree_sum_reference(1.5, 2, 1e4) == doctest::Approx(std::pow(1e4, 4.0 / 3.0)).epsilon(1e-12));
  for (int p : kPowers)
    for (auto conv : {NormingConvention::lepage, NormingConvention::stable_clt})
      CHECK(normalized_degree_sum_reference(1.5, p, 2e5, 1.0, conv) / normalized_degree_sum_reference(1.5, p, 1e5, 1.0, conv) ==
            doctest::Approx(std::pow(2.0, p / 1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(normalized_degree_sum_reference(1.5, 1, 1e4), InvalidInput);
}

TEST_CASE("rescale multipliers") {
  const double g = 1.5, mu = 2.5;
  CHECK(pearson_rescale(g, mu, 1e4) == doctest::Approx(mu * std::pow(1e4, 1 - 1 / g)));
  CHECK(clustering_cm_rescale(g, 1e4) == doctest::Approx(std::pow(1e4, 3 - 4 / g)));
  CHECK(clustering_ecm_exponent(g) == doctest::Approx(-0.583333333).epsilon(1e-8));
  CHECK(clustering_ecm_rescale(g, 1e4) == doctest::Approx(std::pow(1e4, 0.583333333333) / (g * g * g)));
  const double best = std::sqrt(4.0 / 3.0);
  CHECK(clustering_ecm_exponent(best) == doctest::Approx(3 - 2 * std::sqrt(3.0)));
  CHECK(clustering_ecm_exponent(best) > clustering_ecm_exponent(best + 0.05));
  CHECK(clustering_ecm_exponent(best) > clustering_ecm_exponent(best - 0.05));
}
