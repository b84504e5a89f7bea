// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs the full desk-scale experiments (tens of minutes on
// one core).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "cli.hpp"
#include "nullmodels/error.hpp"
#include "nullmodels/experiments.hpp"
#include "nullmodels/generators.hpp"
#include "nullmodels/integrals.hpp"
#include "nullmodels/io.hpp"
#include "nullmodels/stable_limits.hpp"
#include "nullmodels/statistics.hpp"
#include "oracles.hpp"

using namespace nullmodels;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240611;

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

bool within(double v, double centre, double half) { return std::abs(v - centre) <= half; }

// Shared by criteria 4, 5 and 7: one coupled CM/ECM scaling run at gamma 1.5.
const ScalingReport& main_scaling() {
  static const ScalingReport report = [] {
    ExperimentConfig c;
    c.name = "scaling-1.5";
    c.model = Model::ecm;
    c.gamma = 1.5;
    c.sizes = {1'000, 10'000, 100'000, 1'000'000};
    c.replicas = 50;
    c.seed = kSeed;
    c.threads = worker_threads();
    for (const char* s : {"erased_edges", "pearson_abs", "clustering_cm", "clustering_ecm"})
      c.statistics.push_back(StatisticId::parse(s));
    return run_scaling(c);
  }();
  return report;
}

// ---------------------------------------------------------------------------

void partitions(int n, int largest, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int k = std::min(n, largest); k >= 1; --k) {
    current.push_back(k);
    partitions(n - k, k, current, out);
    current.pop_back();
  }
}

Outcome criterion1() {
  std::vector<std::vector<int>> sequences;
  for (int l = 2; l <= 10; l += 2) {
    std::vector<int> cur;
    partitions(l, l, cur, sequences);
  }
  const int runs = 100'000;
  std::size_t events = 0, over3 = 0;
  double worst_z = 0.0;
  std::string worst;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto& d = sequences[s];
    const auto law = oracles::enumerate_matchings(d);
    std::vector<Degree> dv(d.begin(), d.end());
    const auto seq = make_sequence(dv);
    const int n = static_cast<int>(d.size());
    std::vector<std::vector<int>> hits(n, std::vector<int>(n, 0));
    Rng rng(stream_seed(kSeed, 1, s));
    for (int r = 0; r < runs; ++r) {
      const auto g = generate_cm(seq, rng);
      for (const auto& e : g.edges()) ++hits[e.u][e.v];
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double p = law.p_present.at({i, j});
        const double emp = hits[i][j] / double(runs);
        if (p == 0.0 || p == 1.0) {
          if (emp != p) {
            worst_z = INFINITY;
            worst = "impossible/certain event violated";
          }
          continue;
        }
        ++events;
        const double z = std::abs(emp - p) / std::sqrt(p * (1 - p) / runs);
        if (z > 3.0) ++over3;
        if (z > worst_z) {
          worst_z = z;
          std::ostringstream lab;
          lab << "seq(";
          for (std::size_t k = 0; k < d.size(); ++k) lab << (k ? "," : "") << d[k];
          lab << ") pair " << i << "-" << j;
          worst = lab.str();
        }
      }
  }
  // Family-wise 3-sigma: the per-event threshold whose Bonferroni union has
  // the two-sided 3-sigma level.
  const boost::math::normal_distribution<> z01;
  const double alpha3 = 2 * boost::math::cdf(boost::math::complement(z01, 3.0));
  const double z_family = boost::math::quantile(boost::math::complement(z01, alpha3 / (2.0 * events)));
  const double expected_over3 = alpha3 * events;
  Outcome o;
  o.pass = worst_z <= z_family;
  o.detail = std::to_string(sequences.size()) + " sequences, " + std::to_string(events) + " events x " +
             std::to_string(runs) + " draws; max |z| " + fmt(worst_z) + " (" + worst + ") vs family 3-sigma " +
             fmt(z_family) + "; per-event >3 sigma: " + std::to_string(over3) + " (chance expectation " +
             fmt(expected_over3, 3) + ")";
  return o;
}

MultiGraph random_multigraph(std::size_t n, double density, Rng& rng) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j)
      if (rng.uniform() < density) edges.push_back({i, j, static_cast<std::uint32_t>(1 + rng.below(3))});
  return MultiGraph::from_edges(n, edges);
}

Outcome criterion2() {
  Rng rng(stream_seed(kSeed, 2));
  int equal = 0;
  double total = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 3 + rng.below(23);
    const auto g = random_multigraph(n, 0.05 + 0.6 * rng.uniform(), rng);
    const double t = triangle_count(g);
    total += t;
    equal += t == oracles::brute_triangles(g) ? 1 : 0;
  }
  return {equal == 100, std::to_string(equal) + "/100 graphs equal the O(n^3) count (total " + fmt(total, 8) + ")"};
}

Outcome criterion3() {
  Rng rng(stream_seed(kSeed, 3));
  int checked = 0, exact = 0;
  double worst = 0;
  while (checked < 50) {
    const std::size_t n = 3 + rng.below(28);
    std::vector<Degree> d(n);
    for (auto& x : d) x = 1 + static_cast<Degree>(rng.below(6));
    if (std::accumulate(d.begin(), d.end(), Degree{0}) % 2) d[0] += 1;
    const auto g = generate_cm(make_sequence(d), rng);
    const auto oracle = oracles::naive_pearson(g);
    if (oracle.l * oracle.s3 == oracle.s2 * oracle.s2) continue;
    const auto p = pearson(g);
    const double err = std::abs(p.r - static_cast<double>(oracle.r)) / std::max(1.0, std::abs(p.r));
    worst = std::max(worst, err);
    const bool sums = to_double(p.numerator_edge_sum) == static_cast<double>(oracle.edge_sum) &&
                      to_double(p.s2) == static_cast<double>(oracle.s2) &&
                      to_double(p.s3) == static_cast<double>(oracle.s3);
    exact += (sums && err <= 1e-12) ? 1 : 0;
    ++checked;
  }
  const double path = pearson(MultiGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}})).r;
  bool degenerate = false;
  try {
    pearson(MultiGraph::from_edges(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}}));
  } catch (const DegenerateStatistic&) {
    degenerate = true;
  }
  return {exact == 50 && path == -1.0 && degenerate,
          std::to_string(exact) + "/50 match to 12 digits (max rel err " + fmt(worst, 3) + "); path r = " + fmt(path) +
              "; C4 " + (degenerate ? "raises degenerate" : "did not raise")};
}

Outcome criterion4() {
  const auto& r = main_scaling().at("erased_edges");
  return {within(r.fit.slope, 0.5, 0.15),
          "slope of median Z_n = " + fmt(r.fit.slope) + " +- " + fmt(r.fit.standard_error, 2) +
              " (target 0.5 +- 0.15; sharpness is conjectural)"};
}

Outcome criterion5() {
  ExperimentConfig c;
  c.model = Model::ecm;
  c.gamma = 1.5;
  c.sizes = {100'000};
  c.replicas = 200;
  c.seed = stream_seed(kSeed, 5);
  c.threads = worker_threads();
  c.statistics = {StatisticId::parse("pearson")};
  const auto records = run_replicas(c);
  std::size_t neg = 0, defined = 0;
  for (const auto& r : records)
    if (const auto& v = r.values.begin()->second.value) {
      ++defined;
      neg += *v < 0 ? 1 : 0;
    }
  const double frac = defined ? neg / double(defined) : 0.0;
  const auto& s = main_scaling().at("pearson_abs");

  // Diagnostic: the degree-only part -(sum d^2)^2 / (L sum d^3) of the erased
  // graph, without the edge term that still carries weight at these sizes.
  const DegreeLaw law{1.5, 1.0};
  std::vector<double> logn, logneg;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t n = std::size_t(1000) * static_cast<std::size_t>(std::pow(10, k));
    std::vector<double> parts;
    for (std::uint64_t r = 0; r < 10; ++r) {
      Rng drng(stream_seed(kSeed, 55, 100 * k + r)), grng(stream_seed(kSeed, 56, 100 * k + r));
      const auto g = erase(generate_cm(sample_sequence(law, n, drng), grng)).graph;
      double l = 0, s2 = 0, s3 = 0;
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const double d = static_cast<double>(g.degree(static_cast<Vertex>(v)));
        l += d;
        s2 += d * d;
        s3 += d * d * d;
      }
      parts.push_back(s2 * s2 / (l * s3));
    }
    logn.push_back(std::log(static_cast<double>(n)));
    logneg.push_back(std::log(quantile(parts, 0.5)));
  }
  const auto neg_fit = fit_line(logn, logneg);

  return {frac >= 0.95 && within(s.fit.slope, -1.0 / 3.0, 0.1),
          "negative fraction " + fmt(frac) + " over " + std::to_string(defined) + " replicas at n=1e5; slope of median |r| = " +
              fmt(s.fit.slope) + " +- " + fmt(s.fit.standard_error, 2) +
              " (target -0.3333 +- 0.1); degree-only part alone: slope " + fmt(neg_fit.slope)};
}

Outcome criterion6() {
  ExperimentConfig c;
  c.gamma = 1.5;
  c.sizes = {100'000};
  c.replicas = 200;
  c.seed = stream_seed(kSeed, 6);
  c.threads = worker_threads();
  c.normalization = Normalization::paper;
  c.statistics = {StatisticId::parse("pearson")};
  std::array<std::vector<double>, 2> samples;
  const Model models[2] = {Model::irg, Model::ecm};
  for (int m = 0; m < 2; ++m) {
    c.model = models[m];
    for (const auto& r : run_replicas(c))
      if (const auto& v = r.values.begin()->second.value) samples[m].push_back(*v);
  }
  const double ks = ks_two_sample(samples[0], samples[1]);
  return {ks <= 0.1, "KS(IRG, ECM) of rescaled Pearson = " + fmt(ks) + " (" + std::to_string(samples[0].size()) +
                         " vs " + std::to_string(samples[1].size()) + " replicas, n=1e5; bound 0.1); medians " +
                         fmt(quantile(samples[0], 0.5)) + " vs " + fmt(quantile(samples[1], 0.5))};
}

Outcome criterion7() {
  const auto& cm = main_scaling().at("clustering_cm");
  const auto& ecm = main_scaling().at("clustering_ecm");
  std::vector<std::pair<double, double>> sweep{{1.5, ecm.fit.slope}};
  for (double g : {1.1, 1.15, 1.2, 1.8}) {
    ExperimentConfig c;
    c.model = Model::ecm;
    c.gamma = g;
    c.sizes = {1'000, 10'000, 100'000, 1'000'000};
    c.replicas = 50;
    c.seed = stream_seed(kSeed, 7, static_cast<std::uint64_t>(g * 100));
    c.threads = worker_threads();
    c.statistics = {StatisticId::parse("clustering_ecm")};
    sweep.emplace_back(g, run_scaling(c).at("clustering_ecm").fit.slope);
  }
  std::sort(sweep.begin(), sweep.end());
  const auto best = *std::max_element(sweep.begin(), sweep.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  std::string curve;
  for (const auto& [g, s] : sweep) curve += (curve.empty() ? "" : ", ") + fmt(g, 3) + ":" + fmt(s);
  const bool cm_ok = within(cm.fit.slope, -1.0 / 3.0, 0.15);
  const bool ecm_ok = within(ecm.fit.slope, -0.5833, 0.15);
  const bool peak_ok = best.first >= 1.1 && best.first <= 1.2 && within(best.second, -0.46, 0.1);
  return {cm_ok && ecm_ok && peak_ok, "CM slope " + fmt(cm.fit.slope) + " (target -0.3333 +- 0.15); ECM slope " +
                                          fmt(ecm.fit.slope) + " (target -0.5833 +- 0.15); ECM sweep {" + curve +
                                          "} max at gamma " + fmt(best.first, 3) + " slope " + fmt(best.second) +
                                          " (target near 1.15, -0.46 +- 0.1)"};
}

Outcome criterion8() {
  ExperimentConfig c;
  c.model = Model::cm;
  c.gamma = 1.5;
  c.sizes = {100'000};
  c.replicas = 500;
  c.seed = stream_seed(kSeed, 8);
  c.threads = worker_threads();
  c.normalization = Normalization::paper;
  c.statistics = {StatisticId::parse("degree_power_sum:2")};
  c.limit_samples = 100'000;
  c.limit_truncation = 10'000;
  const auto d = run_distribution(c);
  // Diagnostic: the same sums under the norming with the explicit stable constant.
  const double factor = normalized_degree_sum_reference(1.5, 2, 1e5, 1.0, NormingConvention::lepage) /
                        normalized_degree_sum_reference(1.5, 2, 1e5, 1.0, NormingConvention::stable_clt);
  std::vector<double> alt;
  for (double v : d.empirical) alt.push_back(v * factor);
  const double ks_alt = ks_two_sample(alt, d.limit);
  return {d.ks <= 0.08, "KS(sum D^2 / (cn)^{2/gamma}, S_{gamma/2}) = " + fmt(d.ks) + " (500 replicas, 1e5 limit draws; "
                        "bound 0.08); with the stable-constant norming KS = " + fmt(ks_alt)};
}

Outcome criterion9() {
  const DegreeLaw law{1.5, 1.0};
  const auto seq = sample_sequence(law, 10'000, stream_seed(kSeed, 9));
  const auto v = run_conditional_variance(seq, 10'000, stream_seed(kSeed, 9, 1), worker_threads());
  const double ratio = v.ratio();
  return {ratio >= 0.7 && ratio <= 1.3,
          "n Var(r) = " + fmt(v.estimate) + ", prediction (n/L)(2 - S6/S3^2) = " + fmt(v.prediction) + ", ratio " +
              fmt(ratio) + " (bound [0.7, 1.3]); loop-weighted prediction 2n/L = " + fmt(v.prediction_with_loops) +
              ", ratio " + fmt(v.estimate / v.prediction_with_loops)};
}

Outcome criterion10() {
  bool ok = true;
  std::string detail;
  const auto q = [](double u) { return -std::expm1(-u); };
  for (double g : {1.2, 1.5, 1.8}) {
    const auto fast = a_gamma(g);
    TripleIntegralSpec spec;
    spec.gamma = g;
    const auto generic = triple_integral(spec);
    const double diff = std::abs(fast.value - generic.value);
    const double closed = 0.5 * std::pow(std::abs(std::tgamma(-g / 2)), 3);

    spec.truncate(0.1);
    const auto box = triple_integral(spec);
    const auto mc = oracles::mc_triple_integral(g, 0.1, q, 4'000'000, stream_seed(kSeed, 10, static_cast<std::uint64_t>(g * 100)));
    const double bar = std::hypot(mc.standard_error, box.error);
    const bool this_ok = diff <= 1e-4 && std::abs(box.value - mc.value) <= 3 * bar;
    ok = ok && this_ok;
    detail += (detail.empty() ? "" : "; ") + std::string("gamma ") + fmt(g, 2) + ": A = " + fmt(fast.value, 8) +
              " generic diff " + fmt(diff, 2) + " (closed form " + fmt(closed, 8) + "), cube[0.1,10] quad " +
              fmt(box.value, 6) + " vs MC " + fmt(mc.value, 6) + " +- " + fmt(mc.standard_error, 2);
  }
  return {ok, detail};
}

Outcome criterion11() {
  const DegreeLaw law{1.5, 1.0};
  const auto seq = sample_sequence(law, 10'000, stream_seed(kSeed, 11));
  const auto r = check_edge_probability(seq, 100, 10'000, stream_seed(kSeed, 11, 1));
  return {r.p95_abs_deviation <= 0.05 && r.pairs.size() == 100,
          "p95 |P - (1 - e^{-DiDj/L})| = " + fmt(r.p95_abs_deviation) + " over " + std::to_string(r.pairs.size()) +
              " pairs (bound 0.05); max " + fmt(r.max_abs_deviation) + ", D-weighted " + fmt(r.weighted_deviation) +
              "; hub pair (" + std::to_string(r.hub_pair.d_i) + "," + std::to_string(r.hub_pair.d_j) +
              ") deviation " + fmt(r.hub_pair.deviation())};
}

Outcome criterion12() {
  ExperimentConfig c;
  c.model = Model::ecm;
  c.gamma = 1.5;
  c.sizes = {100'000};
  c.replicas = 300;
  c.seed = stream_seed(kSeed, 12);
  c.threads = worker_threads();
  c.limit_samples = 100'000;
  c.limit_truncation = 10'000;
  const auto j = run_joint(c);
  auto matrix = [](const std::array<std::array<double, 3>, 3>& m) {
    return "[" + fmt(m[0][1], 3) + " " + fmt(m[0][2], 3) + " " + fmt(m[1][2], 3) + "]";
  };
  // Diagnostic: the limit functionals evaluated on each replica's own degrees.
  std::array<std::vector<double>, 3> proxy;
  for (std::size_t r = 0; r < c.replicas; ++r) {
    Rng rng(replica_seed(c.seed, 0, r));
    const auto seq = sample_sequence(c.law(), c.sizes.front(), rng);
    double s2 = 0, s3 = 0, s4 = 0, s6 = 0;
    for (Degree d : seq.unadjusted()) {
      const double x = static_cast<double>(d), x2 = x * x;
      s2 += x2;
      s3 += x2 * x;
      s4 += x2 * x2;
      s6 += x2 * x2 * x2;
    }
    proxy[0].push_back(-s2 * s2 / s3);
    proxy[1].push_back(s2 * s2 - 3 * s4 + 2 * s6 / s2);
    proxy[2].push_back(1 / s2);
  }
  const std::string proxy_text = "[" + fmt(spearman(proxy[0], proxy[1]), 3) + " " + fmt(spearman(proxy[0], proxy[2]), 3) +
                                 " " + fmt(spearman(proxy[1], proxy[2]), 3) + "]";
  return {j.max_abs_difference <= 0.2 && j.limit_signs_hold,
          "max |empirical - limit| Spearman = " + fmt(j.max_abs_difference) + " (bound 0.2); off-diagonals (r~Ccm, "
          "r~Cecm, Ccm~Cecm) empirical " + matrix(j.empirical) + " limit " + matrix(j.limit) + " limit functionals of the sampled degrees " + proxy_text + "; used " +
              std::to_string(j.used) + ", degenerate " + std::to_string(j.degenerate) +
              "; limit signs (-,+,+) " + (j.limit_signs_hold ? "hold" : "violated")};
}

// ---------------------------------------------------------------------------

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "nullmodels");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kDeterminismConfig = R"({
  "seed": 314,
  "experiments": [
    {"name": "scaling", "kind": "scaling", "model": "ecm", "gamma": 1.5, "sizes": [500, 2000],
     "replicas": 6, "statistics": ["erased_edges", "pearson_abs", "clustering_cm", "clustering_ecm",
     "degree_power_sum:3"]},
    {"name": "irg", "kind": "scaling", "model": "irg", "kernel": "max_entropy", "gamma": 1.4,
     "sizes": [500, 2000], "replicas": 6, "statistics": ["pearson", "clustering_global"]},
    {"name": "dist", "kind": "distribution", "model": "ecm", "gamma": 1.5, "sizes": [2000], "replicas": 12,
     "statistics": ["pearson"], "normalization": "paper", "limit_samples": 500, "limit_truncation": 500},
    {"name": "compare", "kind": "compare_models", "models": ["irg", "ecm"], "gamma": 1.5, "sizes": [2000],
     "replicas": 12, "statistics": ["pearson"], "normalization": "paper"},
    {"name": "joint", "kind": "joint", "gamma": 1.5, "sizes": [2000], "replicas": 12, "limit_samples": 500,
     "limit_truncation": 500},
    {"name": "erased", "kind": "erased_sums", "gamma": 1.5, "sizes": [500, 2000], "replicas": 6},
    {"name": "condvar", "kind": "conditional_variance", "gamma": 1.5, "n": 500, "pairings": 50},
    {"name": "edges", "kind": "edge_probability", "gamma": 1.5, "n": 500, "pairs": 20, "pairings": 50},
    {"name": "triangles", "kind": "triangles_truncated", "gamma": 1.5, "n": 2000, "replicas": 4, "epsilon": 0.2}
  ]
})";

Outcome criterion13() {
  const fs::path dir = fs::temp_directory_path() / ("nullmodels_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> differ;
  std::size_t compared = 0;
  auto same = [&](const std::string& what, const std::string& a, const std::string& b) {
    ++compared;
    if (a != b || a.empty()) differ.push_back(what);
  };

  for (const char* model : {"cm", "ecm", "irg"}) {
    std::string outs[2], stats[2];
    for (int k = 0; k < 2; ++k) {
      const auto path = (dir / (std::string(model) + std::to_string(k) + ".el")).string();
      cli({"generate", "--model", model, "--gamma", "1.5", "--n", "20000", "--seed", "7", "--out", path});
      cli({"stats", path}, &stats[k]);
      outs[k] = slurp(path);
    }
    same(std::string("generate ") + model, outs[0], outs[1]);
    same(std::string("stats ") + model, stats[0], stats[1]);
  }
  same("erasure report", slurp(dir / "ecm0.el.erasure.json"), slurp(dir / "ecm1.el.erasure.json"));

  std::string lim[2], integ[2];
  cli({"sample-limits", "--count", "200", "--truncation", "1000", "--seed", "3", "--threads", "1"}, &lim[0]);
  cli({"sample-limits", "--count", "200", "--truncation", "1000", "--seed", "3", "--threads", "4"}, &lim[1]);
  same("sample-limits", lim[0], lim[1]);
  cli({"integrate", "--gamma", "1.3"}, &integ[0]);
  cli({"integrate", "--gamma", "1.3"}, &integ[1]);
  same("integrate", integ[0], integ[1]);

  const fs::path config = dir / "config.json";
  std::ofstream(config) << kDeterminismConfig;
  const int c1 = cli({"experiment", "--config", config.string(), "--threads", "1", "--out", (dir / "t1").string()});
  const int c4 = cli({"experiment", "--config", config.string(), "--threads", "4", "--out", (dir / "t4").string()});
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "t1")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    ++files;
    same("experiment " + name.string(), slurp(entry.path()), slurp(dir / "t4" / name));
  }
  auto manifest = [&](const char* sub) {
    auto j = Json::parse(slurp(dir / sub / "manifest.json"));
    for (const char* k : {"started_at", "wall_clock_seconds", "threads", "outputs"}) j.erase(k);
    return j.dump();
  };
  same("manifest (timing fields excluded)", manifest("t1"), manifest("t4"));
  fs::remove_all(dir);

  std::string detail = std::to_string(compared) + " artifact pairs compared (" + std::to_string(files) +
                       " experiment files, threads 1 vs 4); exit codes " + std::to_string(c1) + "/" +
                       std::to_string(c4);
  if (!differ.empty()) {
    detail += "; differing:";
    for (const auto& d : differ) detail += " " + d;
  }
  return {differ.empty() && c1 == 0 && c4 == 0 && files >= 9 * 2, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pairing law vs exhaustive matching enumeration", criterion1},
      {"triangle count vs O(n^3) brute force", criterion2},
      {"Pearson vs naive double loop", criterion3},
      {"erased-edge scaling exponent", criterion4},
      {"structural negative correlations", criterion5},
      {"IRG and ECM Pearson limits coincide", criterion6},
      {"clustering exponents and the maximal-clustering curve", criterion7},
      {"degree-sum stable limit", criterion8},
      {"conditional variance of r in CM", criterion9},
      {"A_gamma quadrature cross-checks", criterion10},
      {"edge-probability approximation", criterion11},
      {"joint coupling of the three statistics", criterion12},
      {"byte-for-byte determinism", criterion13},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " | " << o.detail
              << " [" << fmt(secs, 3) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
