#include "nullmodels/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "nullmodels/error.hpp"
#include "nullmodels/integrals.hpp"
#include "nullmodels/simd.hpp"
#include "nullmodels/statistics.hpp"
#include "parallel.hpp"

namespace nullmodels {

namespace {

const std::vector<std::string> kPlainStatistics{
    "pearson",       "pearson_abs",    "clustering_global", "pearson_cm",     "pearson_ecm",
    "clustering_cm", "clustering_ecm", "erased_edges",      "erased_pair_sum"};

bool needs_erasure(const std::string& name) {
  return name == "pearson_ecm" || name == "clustering_ecm" || name == "erased_edges" ||
         name == "erased_stub_sum" || name == "erased_pair_sum";
}

bool chain_statistic(const std::string& name) {
  return needs_erasure(name) || name == "pearson_cm" || name == "clustering_cm";
}

}  // namespace

Model model_from_name(const std::string& name) {
  if (name == "cm") return Model::cm;
  if (name == "ecm") return Model::ecm;
  if (name == "irg") return Model::irg;
  throw InvalidInput("unknown model '" + name + "' (expected cm, ecm or irg)");
}

std::string model_name(Model model) {
  switch (model) {
    case Model::cm: return "cm";
    case Model::ecm: return "ecm";
    case Model::irg: return "irg";
  }
  return "?";
}

Normalization normalization_from_name(const std::string& name) {
  if (name == "raw") return Normalization::raw;
  if (name == "paper") return Normalization::paper;
  if (name == "stable_clt") return Normalization::stable_clt;
  throw InvalidInput("unknown normalization '" + name + "' (expected raw, paper or stable_clt)");
}

std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::paper: return "paper";
    case Normalization::stable_clt: return "stable_clt";
  }
  return "?";
}

StatisticId StatisticId::parse(const std::string& text) {
  std::string name = text;
  int power = 0;
  const auto colon = text.find_first_of(":(");
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    std::string arg = text.substr(colon + 1);
    if (text[colon] == '(') {
      if (arg.empty() || arg.back() != ')') throw InvalidInput("malformed statistic '" + text + "'");
      arg.pop_back();
    }
    std::size_t used = 0;
    try {
      power = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) throw InvalidInput("malformed statistic '" + text + "'");
  }
  if (name == "degree_power_sum") {
    if (power != 1 && power != 2 && power != 3 && power != 4 && power != 6)
      throw InvalidInput("degree_power_sum needs p in {1,2,3,4,6}, got '" + text + "'");
  } else if (name == "erased_stub_sum") {
    if (power < 0 || power > 2) throw InvalidInput("erased_stub_sum needs p in {0,1,2}, got '" + text + "'");
  } else {
    if (colon != std::string::npos ||
        std::find(kPlainStatistics.begin(), kPlainStatistics.end(), name) == kPlainStatistics.end())
      throw InvalidInput("unknown statistic '" + text + "'");
  }
  return StatisticId{name, power};
}

std::string StatisticId::str() const {
  if (name == "degree_power_sum" || name == "erased_stub_sum") return name + ":" + std::to_string(power);
  return name;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (!(gamma > 1.0 && gamma < 2.0)) problems.push_back("gamma must lie in (1,2)");
  if (!(scale > 0.0)) problems.push_back("scale must be positive");
  if (sizes.empty()) problems.push_back("sizes must not be empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) problems.push_back("sizes must be at least 2");
    if (i > 0 && sizes[i] <= sizes[i - 1]) problems.push_back("sizes must be strictly increasing");
  }
  if (replicas < 2) problems.push_back("replicas must be at least 2");
  if (model == Model::irg) {
    try {
      validate_kernel(ConnectionKernel::from_name(kernel));
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  for (const auto& s : statistics) {
    if (model == Model::irg && chain_statistic(s.name))
      problems.push_back("statistic " + s.str() + " needs the cm/ecm chain, model is irg");
    if (normalization == Normalization::stable_clt && s.name != "degree_power_sum")
      problems.push_back("stable_clt normalization applies to degree_power_sum only");
    if (normalization != Normalization::raw && s.name == "degree_power_sum" && s.power < 2)
      problems.push_back("degree_power_sum:1 has no stable norming");
  }
  if (!problems.empty()) {
    std::string msg = "invalid experiment '" + name + "':";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
}

std::uint64_t replica_seed(std::uint64_t master, std::size_t size_index, std::size_t replica) {
  return stream_seed(master, size_index, replica);
}

namespace {

// Lazily built graphs of one replica.
class Draw {
 public:
  Draw(const ExperimentConfig& config, double mu, std::size_t n, std::uint64_t seed)
      : config_(config), mu_(mu), n_(n), graph_rng_(stream_seed(seed, 1)) {
    Rng degree_rng(seed);
    seq_ = sample_sequence(config.law(), n, degree_rng);
  }

  const DegreeSequence& sequence() const { return seq_; }

  const MultiGraph& cm() {
    if (!cm_) cm_ = generate_cm(seq_, graph_rng_);
    return *cm_;
  }
  const Erasure& erasure() {
    if (!erasure_) erasure_ = erase(cm());
    return *erasure_;
  }
  const MultiGraph& irg() {
    if (!irg_) irg_ = generate_irg(make_sequence(seq_.unadjusted()), ConnectionKernel::from_name(config_.kernel),
                                   graph_rng_, mu_);
    return *irg_;
  }
  const MultiGraph& model_graph() {
    switch (config_.model) {
      case Model::cm: return cm();
      case Model::ecm: return erasure().graph;
      case Model::irg: return irg();
    }
    return cm();
  }

  const ClusteringResult& clustering(const MultiGraph& g) {
    auto it = clustering_.find(&g);
    if (it == clustering_.end()) it = clustering_.emplace(&g, clustering_global(g)).first;
    return it->second;
  }

  StatisticValue evaluate(const StatisticId& id) {
    try {
      return {value(id), {}};
    } catch (const DegenerateStatistic& e) {
      return {std::nullopt, e.what()};
    }
  }

 private:
  double n() const { return static_cast<double>(n_); }
  bool paper() const { return config_.normalization == Normalization::paper; }

  double pearson_norm(bool erased_like) const {
    if (!paper()) return 1.0;
    return erased_like ? pearson_rescale(config_.gamma, mu_, n(), config_.scale) : std::sqrt(n());
  }
  double clustering_norm(bool erased_like) const {
    if (!paper()) return 1.0;
    return erased_like ? clustering_ecm_rescale(config_.gamma, n(), config_.scale)
                       : clustering_cm_rescale(config_.gamma, n(), config_.scale);
  }

  double value(const StatisticId& id) {
    const std::string& s = id.name;
    const bool model_erased_like = config_.model != Model::cm;
    if (s == "pearson") return pearson(model_graph()).r * pearson_norm(model_erased_like);
    if (s == "pearson_abs") return std::abs(pearson(model_graph()).r) * pearson_norm(model_erased_like);
    if (s == "clustering_global") return clustering(model_graph()).c_global * clustering_norm(model_erased_like);
    if (s == "pearson_cm") return pearson(cm()).r * pearson_norm(false);
    if (s == "pearson_ecm") return pearson(erasure().graph).r * pearson_norm(true);
    if (s == "clustering_cm") return clustering(cm()).c_global * clustering_norm(false);
    if (s == "clustering_ecm") return clustering(erasure().graph).c_global * clustering_norm(true);
    if (s == "erased_edges") {
      const double z = static_cast<double>(erasure().report.z_total);
      return paper() ? z * std::pow(n(), config_.gamma - 2.0) : z;
    }
    if (s == "degree_power_sum") {
      const auto values = seq_.unadjusted();
      const double sum = to_double(degree_power_sum(values, id.power));
      if (config_.normalization == Normalization::raw) return sum;
      const auto convention =
          paper() ? NormingConvention::lepage : NormingConvention::stable_clt;
      return sum / normalized_degree_sum_reference(config_.gamma, id.power, n(), config_.scale, convention);
    }
    if (s == "erased_stub_sum") {
      const auto& removed = erasure().report.removed_stubs;
      long double total = 0;
      for (std::size_t i = 0; i < removed.size(); ++i) {
        if (removed[i] == 0) continue;
        const long double d = static_cast<long double>(seq_.values[i]);
        total += std::pow(d, id.power) * static_cast<long double>(removed[i]);
      }
      return static_cast<double>(total);
    }
    if (s == "erased_pair_sum") {
      long double total = 0;
      for (const auto& z : erasure().report.z_pair) {
        if (z.u == z.v) continue;
        total += static_cast<long double>(z.count) * static_cast<long double>(seq_.values[z.u]) *
                 static_cast<long double>(seq_.values[z.v]);
      }
      return static_cast<double>(total);
    }
    throw InvalidInput("unknown statistic " + id.str());
  }

  const ExperimentConfig& config_;
  double mu_;
  std::size_t n_;
  Rng graph_rng_;
  DegreeSequence seq_;
  std::optional<MultiGraph> cm_;
  std::optional<Erasure> erasure_;
  std::optional<MultiGraph> irg_;
  std::map<const MultiGraph*, ClusteringResult> clustering_;
};

}  // namespace

std::vector<ReplicaRecord> run_replicas(const ExperimentConfig& config) {
  config.validate();
  const double mu = config.law().mean();
  const std::size_t per_size = config.replicas;
  std::vector<ReplicaRecord> records(config.sizes.size() * per_size);
  detail::parallel_for(records.size(), config.threads, [&](std::size_t task) {
    const std::size_t size_index = task / per_size;
    const std::size_t replica = task % per_size;
    ReplicaRecord& rec = records[task];
    rec.size_index = size_index;
    rec.n = config.sizes[size_index];
    rec.replica = replica;
    rec.seed = replica_seed(config.seed, size_index, replica);
    Draw draw(config, mu, rec.n, rec.seed);
    for (const auto& id : config.statistics) rec.values[id] = draw.evaluate(id);
  });
  return records;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  return {quantile(values, 0.05), quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75),
          quantile(values, 0.95)};
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("fit_line needs at least two points");
  const double k = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit_line needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() < 3) {
    fit.standard_error = std::nan("");
  } else {
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.standard_error = std::sqrt(ssr / (k - 2.0) / sxx);
  }
  return fit;
}

const ScalingResult& ScalingReport::at(const std::string& statistic) const {
  const auto it = results.find(StatisticId::parse(statistic));
  if (it == results.end()) throw InvalidInput("statistic " + statistic + " was not part of the run");
  return it->second;
}

namespace {

ScalingResult summarize_statistic(const ExperimentConfig& config, const std::vector<ReplicaRecord>& records,
                                  const StatisticId& id) {
  ScalingResult result;
  result.statistic = id;
  std::vector<double> log_n, log_median;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    SizeSummary summary;
    summary.n = config.sizes[si];
    std::vector<double> abs_values;
    std::size_t negative = 0;
    for (const auto& rec : records) {
      if (rec.size_index != si) continue;
      const auto it = rec.values.find(id);
      if (it == rec.values.end() || !it->second.value) {
        ++summary.degenerate;
        continue;
      }
      const double v = *it->second.value;
      abs_values.push_back(std::abs(v));
      if (v < 0) ++negative;
    }
    summary.count = abs_values.size();
    if (summary.count == 0)
      throw ExperimentError("experiment '" + config.name + "': every replica of " + id.str() +
                            " is degenerate at n = " + std::to_string(summary.n));
    summary.median_abs = quantile(abs_values, 0.5);
    summary.q25_abs = quantile(abs_values, 0.25);
    summary.q75_abs = quantile(abs_values, 0.75);
    summary.negative_fraction = static_cast<double>(negative) / static_cast<double>(summary.count);
    if (summary.median_abs > 0.0) {
      log_n.push_back(std::log(static_cast<double>(summary.n)));
      log_median.push_back(std::log(summary.median_abs));
    }
    result.sizes.push_back(summary);
  }
  if (log_n.size() >= 2) {
    result.fit = fit_line(log_n, log_median);
  } else {
    result.fit.slope = result.fit.intercept = result.fit.standard_error = std::nan("");
  }
  return result;
}

}  // namespace

ScalingReport summarize_scaling(const ExperimentConfig& config, std::vector<ReplicaRecord> records) {
  ScalingReport report;
  for (const auto& id : config.statistics) report.results[id] = summarize_statistic(config, records, id);
  report.records = std::move(records);
  return report;
}

ScalingReport run_scaling(const ExperimentConfig& config) {
  if (config.statistics.empty()) throw ValidationError("run_scaling: no statistics configured");
  return summarize_scaling(config, run_replicas(config));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

LimitModel limit_model(const ExperimentConfig& config) {
  LimitModel m;
  m.gamma = config.gamma;
  m.mu = config.law().mean();
  if (config.model == Model::irg) {
    TripleIntegralSpec spec;
    spec.gamma = config.gamma;
    spec.kernel = ConnectionKernel::from_name(config.kernel);
    m.a_gamma = triple_integral(spec).value;
  } else {
    m.a_gamma = a_gamma(config.gamma).value;
  }
  return m;
}

double limit_variable(const StatisticId& statistic, Model model, const LimitSample& sample) {
  const std::string& s = statistic.name;
  if (s == "degree_power_sum") return sample.s_of(statistic.power);
  if (s == "pearson_ecm") return sample.composed.pearson_ecm;
  if (s == "clustering_cm") return sample.composed.clustering_cm;
  if (s == "clustering_ecm") return sample.composed.clustering_ecm;
  if (model != Model::cm) {
    if (s == "pearson") return sample.composed.pearson_ecm;
    if (s == "pearson_abs") return -sample.composed.pearson_ecm;
    if (s == "clustering_global") return sample.composed.clustering_ecm;
  } else if (s == "clustering_global") {
    return sample.composed.clustering_cm;
  }
  throw InvalidInput("no limit variable for statistic " + statistic.str() + " under model " + model_name(model));
}

DistributionResult distribution_from(const ExperimentConfig& config, const std::vector<ReplicaRecord>& records,
                                     const StatisticId& statistic, const std::vector<LimitSample>& limits) {
  DistributionResult out;
  out.statistic = statistic;
  const std::size_t last = config.sizes.size() - 1;
  for (const auto& rec : records) {
    if (rec.size_index != last) continue;
    const auto it = rec.values.find(statistic);
    if (it != rec.values.end() && it->second.value)
      out.empirical.push_back(*it->second.value);
    else
      ++out.degenerate;
  }
  if (out.empirical.empty())
    throw ExperimentError("experiment '" + config.name + "': every replica of " + statistic.str() + " is degenerate");
  out.limit.reserve(limits.size());
  for (const auto& l : limits) out.limit.push_back(limit_variable(statistic, config.model, l));
  out.ks = ks_two_sample(out.empirical, out.limit);
  out.empirical_quantiles = quantiles(out.empirical);
  out.limit_quantiles = quantiles(out.limit);
  return out;
}

namespace {

std::vector<LimitSample> draw_limits(const ExperimentConfig& config) {
  LimitSamplerConfig lc;
  lc.gamma = config.gamma;
  lc.truncation = config.limit_truncation;
  return sample_limits(lc, limit_model(config), config.limit_samples, stream_seed(config.seed, 0x11317ULL),
                       config.threads);
}

}  // namespace

DistributionResult run_distribution(const ExperimentConfig& config) {
  if (config.statistics.size() != 1) throw ValidationError("run_distribution: exactly one statistic expected");
  if (config.limit_samples < 1) throw ValidationError("run_distribution: limit_samples must be positive");
  ExperimentConfig c = config;
  c.sizes = {config.sizes.back()};
  auto records = run_replicas(c);
  auto out = distribution_from(c, records, c.statistics.front(), draw_limits(c));
  out.records = std::move(records);
  return out;
}

ConditionalVariance run_conditional_variance(const DegreeSequence& seq, std::size_t pairings, std::uint64_t seed,
                                             unsigned threads) {
  if (pairings < 2) throw InvalidInput("run_conditional_variance: at least two pairings are needed");
  if (seq.total % 2 != 0) throw InvalidInput("run_conditional_variance: odd stub total");
  const BigInt s2 = degree_power_sum(seq.values, 2);
  const BigInt s3 = degree_power_sum(seq.values, 3);
  const BigInt s6 = degree_power_sum(seq.values, 6);
  if (BigInt(seq.total) * s3 == s2 * s2)
    throw DegenerateStatistic("run_conditional_variance: degenerate denominator (all degrees equal)");

  std::vector<double> r(pairings);
  detail::parallel_for(pairings, threads, [&](std::size_t p) {
    Rng rng(stream_seed(seed, p));
    const auto stubs = pair_stubs(seq, rng);
    // Every edge, loops included, contributes 2 D_u D_v to the ordered sum.
    unsigned __int128 edge_sum = 0;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2)
      edge_sum += static_cast<unsigned __int128>(seq.values[stubs[k]]) *
                  static_cast<unsigned __int128>(seq.values[stubs[k + 1]]);
    r[p] = pearson_from_sums(to_big(2 * edge_sum), s2, s3, seq.total).r;
  });

  ConditionalVariance out;
  out.n = seq.size();
  out.pairings = pairings;
  const double m = static_cast<double>(pairings);
  out.mean_r = std::accumulate(r.begin(), r.end(), 0.0) / m;
  double ss = 0.0;
  for (double x : r) ss += (x - out.mean_r) * (x - out.mean_r);
  const double n = static_cast<double>(seq.size());
  const double l = static_cast<double>(seq.total);
  out.estimate = n * ss / (m - 1.0);
  const double s3d = to_double(s3);
  out.prediction = n / l * (2.0 - to_double(s6) / (s3d * s3d));
  out.prediction_with_loops = 2.0 * n / l;
  return out;
}

ErasedSumsResult run_erased_sums(const ExperimentConfig& config) {
  if (config.model != Model::ecm) throw ValidationError("run_erased_sums: model must be ecm");
  ExperimentConfig c = config;
  c.normalization = Normalization::raw;
  c.statistics = {StatisticId{"erased_stub_sum", 0}, StatisticId{"erased_stub_sum", 1},
                  StatisticId{"erased_stub_sum", 2}, StatisticId{"erased_pair_sum", 0}};
  auto report = run_scaling(c);
  ErasedSumsResult out;
  for (int p = 0; p < 3; ++p) out.stub_sums[p] = report.results.at(c.statistics[p]);
  out.pair_sum = report.results.at(c.statistics[3]);
  out.records = std::move(report.records);
  return out;
}

EdgeProbabilityCheck check_edge_probability(const DegreeSequence& seq, std::size_t pair_count, std::size_t pairings,
                                            std::uint64_t seed) {
  if (seq.total % 2 != 0) throw InvalidInput("check_edge_probability: odd stub total");
  if (pairings < 1) throw InvalidInput("check_edge_probability: at least one pairing is needed");
  const std::size_t n = seq.size();
  std::vector<Vertex> owner;
  owner.reserve(static_cast<std::size_t>(seq.total));
  for (std::size_t v = 0; v < n; ++v) owner.insert(owner.end(), static_cast<std::size_t>(seq.values[v]), Vertex(v));

  auto key = [](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::unordered_map<std::uint64_t, std::size_t> index;
  auto track = [&](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    if (index.emplace(key(a, b), pairs.size()).second) pairs.emplace_back(a, b);
  };

  // Hub pair first: the two largest degrees, lowest index on ties.
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex(0));
  if (n < 2) throw InvalidInput("check_edge_probability: need at least two vertices");
  std::partial_sort(order.begin(), order.begin() + 2, order.end(), [&](Vertex a, Vertex b) {
    return seq.values[a] != seq.values[b] ? seq.values[a] > seq.values[b] : a < b;
  });
  track(order[0], order[1]);

  Rng rng(seed);
  std::vector<std::pair<Vertex, Vertex>> sampled;
  const std::size_t max_pairs = n * (n - 1) / 2;
  std::size_t attempts = 0;
  std::unordered_map<std::uint64_t, bool> seen;
  while (sampled.size() < std::min(pair_count, max_pairs) && attempts < 1000 * (pair_count + 1)) {
    ++attempts;
    const Vertex a = owner[rng.below(owner.size())];
    const Vertex b = owner[rng.below(owner.size())];
    if (a == b || !seen.emplace(key(a, b), true).second) continue;
    sampled.emplace_back(std::min(a, b), std::max(a, b));
    track(a, b);
  }

  std::vector<std::uint64_t> hits(pairs.size(), 0), stamp(pairs.size(), 0);
  std::vector<char> tracked(n, 0);
  for (const auto& [a, b] : pairs) tracked[a] = tracked[b] = 1;
  for (std::size_t m = 1; m <= pairings; ++m) {
    Rng pr(stream_seed(seed, 1, m));
    const auto stubs = pair_stubs(seq, pr);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      const Vertex a = stubs[k], b = stubs[k + 1];
      if (a == b || !tracked[a] || !tracked[b]) continue;
      const auto it = index.find(key(a, b));
      if (it == index.end() || stamp[it->second] == m) continue;
      stamp[it->second] = m;
      ++hits[it->second];
    }
  }

  const double l = static_cast<double>(seq.total);
  auto make = [&](Vertex a, Vertex b) {
    PairProbability p;
    p.i = a;
    p.j = b;
    p.d_i = seq.values[a];
    p.d_j = seq.values[b];
    p.empirical = static_cast<double>(hits[index.at(key(a, b))]) / static_cast<double>(pairings);
    p.approximation = -std::expm1(-static_cast<double>(p.d_i) * static_cast<double>(p.d_j) / l);
    return p;
  };

  EdgeProbabilityCheck out;
  out.hub_pair = make(pairs[0].first, pairs[0].second);
  std::vector<double> abs_dev;
  double weighted = 0, weight = 0;
  for (const auto& [a, b] : sampled) {
    out.pairs.push_back(make(a, b));
    const auto& p = out.pairs.back();
    abs_dev.push_back(std::abs(p.deviation()));
    const double w = static_cast<double>(p.d_i) * static_cast<double>(p.d_j);
    weighted += w * abs_dev.back();
    weight += w;
  }
  if (!abs_dev.empty()) {
    out.p95_abs_deviation = quantile(abs_dev, 0.95);
    out.max_abs_deviation = *std::max_element(abs_dev.begin(), abs_dev.end());
    out.weighted_deviation = weighted / weight;
  }
  return out;
}

double expected_triangles_truncated(const DegreeSequence& seq, double epsilon, bool use_mu, double mu) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("expected_triangles_truncated: epsilon must lie in (0,1)");
  if (!(mu > 0.0)) throw InvalidInput("expected_triangles_truncated: mu must be positive");
  const double n = static_cast<double>(seq.size());
  const double root = std::sqrt(mu * n);
  const double lo = epsilon * root, hi = root / epsilon;
  std::vector<double> band;
  for (Degree d : seq.values)
    if (static_cast<double>(d) >= lo && static_cast<double>(d) <= hi) band.push_back(static_cast<double>(d));
  const std::size_t m = band.size();
  if (m < 3) return 0.0;
  const double denom = use_mu ? mu * n : static_cast<double>(seq.total);

  std::vector<double> g(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g[i * m + j] = -std::expm1(-band[i] * band[j] / denom);
  const std::vector<double> ones(m, 1.0);
  const auto& k = simd::kernels();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j + 1 < m; ++j) {
      const std::size_t len = m - j - 1;
      total += g[i * m + j] * k.weighted_dot3(ones.data(), g.data() + i * m + j + 1, g.data() + j * m + j + 1, len);
    }
  return total;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidInput("spearman: need two samples of equal size >= 2");
  const auto ra = ranks(a), rb = ranks(b);
  const double k = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / k;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / k;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw DegenerateStatistic("spearman: constant sample");
  return sab / std::sqrt(saa * sbb);
}

JointResult run_joint(const ExperimentConfig& config) {
  if (config.model == Model::irg) throw ValidationError("run_joint: needs the cm/ecm chain");
  ExperimentConfig c = config;
  c.sizes = {config.sizes.back()};
  c.normalization = Normalization::paper;
  c.statistics = {StatisticId{"pearson_ecm", 0}, StatisticId{"clustering_cm", 0}, StatisticId{"clustering_ecm", 0}};
  const auto records = run_replicas(c);

  JointResult out;
  std::array<std::vector<double>, 3> emp, lim;
  for (const auto& rec : records) {
    std::array<double, 3> row{};
    bool ok = true;
    for (int s = 0; s < 3; ++s) {
      const auto& v = rec.values.at(c.statistics[s]);
      if (!v.value) {
        ok = false;
        break;
      }
      row[s] = *v.value;
    }
    if (!ok) {
      ++out.degenerate;
      continue;
    }
    for (int s = 0; s < 3; ++s) emp[s].push_back(row[s]);
  }
  out.used = emp[0].size();
  if (out.used < 2) throw ExperimentError("run_joint: fewer than two non-degenerate replicas");

  for (const auto& l : draw_limits(c)) {
    lim[0].push_back(l.composed.pearson_ecm);
    lim[1].push_back(l.composed.clustering_cm);
    lim[2].push_back(l.composed.clustering_ecm);
    if (!(l.composed.pearson_ecm < 0 && l.composed.clustering_cm > 0 && l.composed.clustering_ecm > 0))
      out.limit_signs_hold = false;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      out.empirical[a][b] = a == b ? 1.0 : spearman(emp[a], emp[b]);
      out.limit[a][b] = a == b ? 1.0 : spearman(lim[a], lim[b]);
      out.max_abs_difference = std::max(out.max_abs_difference, std::abs(out.empirical[a][b] - out.limit[a][b]));
    }
  return out;
}

}  // namespace nullmodels
