#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nullmodels/degree_model.hpp"
#include "nullmodels/generators.hpp"
#include "nullmodels/stable_limits.hpp"

namespace nullmodels {

enum class Model { cm, ecm, irg };

Model model_from_name(const std::string& name);
std::string model_name(Model model);

enum class Normalization {
  raw,
  // Divide (or multiply) by the pure-Pareto norming of the statistic, so that
  // it converges to the matching composed limit variable.
  paper,
  // Power sums only: the norming with the explicit stable constant.
  stable_clt,
};

Normalization normalization_from_name(const std::string& name);
std::string normalization_name(Normalization n);

// Statistics a replica can report. Names as accepted in configs:
//   pearson, pearson_abs, clustering_global   on the configured model's graph
//   pearson_cm, pearson_ecm                  Pearson of the CM draw / its erasure
//   clustering_cm, clustering_ecm            clustering of the CM draw / its erasure
//   erased_edges                             Z_n of the erasure
//   degree_power_sum:p                       sum_i D_i^p, p in {1,2,3,4,6}
//   erased_stub_sum:p                        sum_i D_i^p Y*_i, p in {0,1,2}
//   erased_pair_sum                          sum_{i<j} Z_ij D_i D_j
// With Normalization::paper the value is multiplied by its norming:
//   pearson_ecm and Pearson of ecm/irg graphs: mu c^{-1/gamma} n^{1-1/gamma}
//   pearson_cm and Pearson of cm graphs:       sqrt(n)
//   clustering_cm:                             clustering_cm_rescale
//   clustering_ecm and clustering of irg:      clustering_ecm_rescale
//   erased_edges:                              n^{gamma-2}
//   degree_power_sum:p                         1 / a_{n,p}
struct StatisticId {
  std::string name;
  int power = 0;  // degree_power_sum only

  static StatisticId parse(const std::string& text);
  std::string str() const;
  friend bool operator<(const StatisticId& a, const StatisticId& b) { return a.str() < b.str(); }
  friend bool operator==(const StatisticId& a, const StatisticId& b) { return a.str() == b.str(); }
};

struct ExperimentConfig {
  std::string name = "experiment";
  Model model = Model::ecm;
  std::string kernel = "poisson";  // irg only
  double gamma = 1.5;
  double scale = 1.0;
  std::vector<std::size_t> sizes{1'000, 10'000, 100'000, 1'000'000};
  std::size_t replicas = 50;
  std::vector<StatisticId> statistics;
  std::uint64_t seed = 1;
  Normalization normalization = Normalization::raw;
  unsigned threads = 1;

  // Limit-sample side of distributional comparisons.
  std::size_t limit_samples = 100'000;
  std::size_t limit_truncation = 10'000;

  // Throws ValidationError: sizes strictly increasing and >= 2, replicas >= 2,
  // gamma in (1,2), statistics applicable to the model.
  void validate() const;
  DegreeLaw law() const { return DegreeLaw{gamma, scale}; }
};

// One statistic of one replica; `value` is empty when the statistic is
// undefined on that draw and `reason` says why.
struct StatisticValue {
  std::optional<double> value;
  std::string reason;
};

struct ReplicaRecord {
  std::size_t size_index = 0;
  std::size_t n = 0;
  std::size_t replica = 0;
  std::uint64_t seed = 0;
  std::map<StatisticId, StatisticValue> values;
};

// Degree draws use stream (seed, size index, replica); graph randomness a
// child stream of it. Configs that differ only in model therefore see the
// same degree sequences.
std::uint64_t replica_seed(std::uint64_t master, std::size_t size_index, std::size_t replica);

// Every replica of every size; the order is (size, replica) and does not
// depend on config.threads.
std::vector<ReplicaRecord> run_replicas(const ExperimentConfig& config);

struct Quantiles {
  double q05 = 0, q25 = 0, q50 = 0, q75 = 0, q95 = 0;
};

// Linear-interpolated sample quantile, p in [0,1]. Empty input throws.
double quantile(std::vector<double> values, double p);
Quantiles quantiles(std::vector<double> values);

struct SizeSummary {
  std::size_t n = 0;
  std::size_t count = 0;       // replicas with a defined value
  std::size_t degenerate = 0;  // replicas excluded
  double median_abs = 0.0;
  double q25_abs = 0.0;
  double q75_abs = 0.0;
  double negative_fraction = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  // OLS standard error; NaN with fewer than three points.
  double standard_error = 0.0;
};

// OLS of y on x.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingResult {
  StatisticId statistic;
  std::vector<SizeSummary> sizes;
  SlopeFit fit;  // log(median |value|) against log n
};

struct ScalingReport {
  std::vector<ReplicaRecord> records;
  std::map<StatisticId, ScalingResult> results;

  const ScalingResult& at(const std::string& statistic) const;
};

// Summaries per size and the fitted slope of log median |statistic| versus
// log n for every configured statistic. Throws ExperimentError naming the
// size when every replica of a size is degenerate.
ScalingReport summarize_scaling(const ExperimentConfig& config, std::vector<ReplicaRecord> records);
ScalingReport run_scaling(const ExperimentConfig& config);

// Largest vertical distance between the two empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct DistributionResult {
  StatisticId statistic;
  std::vector<double> empirical;
  std::vector<double> limit;
  double ks = 0.0;
  Quantiles empirical_quantiles;
  Quantiles limit_quantiles;
  std::size_t degenerate = 0;
  std::vector<ReplicaRecord> records;
};

// Composed limit variable matching a statistic (degree_power_sum:p -> S_{gamma/p},
// pearson of ecm/irg -> pearson_ecm, clustering_cm, clustering_ecm).
double limit_variable(const StatisticId& statistic, Model model, const LimitSample& sample);

// Rescaled statistic at the last configured size (the only size simulated)
// against `limit_samples` joint limit draws. Uses config.normalization.
DistributionResult run_distribution(const ExperimentConfig& config);
DistributionResult distribution_from(const ExperimentConfig& config, const std::vector<ReplicaRecord>& records,
                                     const StatisticId& statistic, const std::vector<LimitSample>& limits);

// Limit model for config: mu of the law, A_gamma of the poisson kernel.
LimitModel limit_model(const ExperimentConfig& config);

struct ConditionalVariance {
  std::size_t n = 0;
  std::size_t pairings = 0;
  double mean_r = 0.0;
  double estimate = 0.0;    // n * sample variance of r over the pairings
  double prediction = 0.0;  // (n / L)(2 - sum D^6 / (sum D^3)^2)
  // 2n/L: the same expansion when self-loops keep their double weight in
  // the edge sum.
  double prediction_with_loops = 0.0;
  double ratio() const { return estimate / prediction; }
};

// Resamples `pairings` uniform matchings of the fixed sequence. Throws
// DegenerateStatistic for sequences on which Pearson is undefined and
// InvalidInput when pairings < 2.
ConditionalVariance run_conditional_variance(const DegreeSequence& seq, std::size_t pairings, std::uint64_t seed,
                                             unsigned threads = 1);

struct ErasedSumsResult {
  // sum_i D_i^p Y*_i for p = 0, 1, 2
  std::array<ScalingResult, 3> stub_sums;
  // sum_{i<j} Z_ij D_i D_j
  ScalingResult pair_sum;
  std::vector<ReplicaRecord> records;
};

// ECM only.
ErasedSumsResult run_erased_sums(const ExperimentConfig& config);

struct PairProbability {
  Vertex i = 0;
  Vertex j = 0;
  Degree d_i = 0;
  Degree d_j = 0;
  double empirical = 0.0;
  double approximation = 0.0;  // 1 - exp(-D_i D_j / L)
  double deviation() const { return empirical - approximation; }
};

struct EdgeProbabilityCheck {
  std::vector<PairProbability> pairs;
  PairProbability hub_pair;  // the two largest degrees
  double p95_abs_deviation = 0.0;
  double max_abs_deviation = 0.0;
  // sum D_i D_j |deviation| / sum D_i D_j over the sampled pairs
  double weighted_deviation = 0.0;
};

// Pairs are drawn by choosing both endpoints as owners of uniform stubs
// (distinct vertices, distinct pairs), so each pair is picked with weight
// proportional to D_i D_j. At most as many pairs as exist are sampled.
EdgeProbabilityCheck check_edge_probability(const DegreeSequence& seq, std::size_t pair_count, std::size_t pairings,
                                            std::uint64_t seed);

// sum over i<j<k with all degrees in [eps sqrt(mu n), sqrt(mu n)/eps] of
// prod (1 - exp(-D_a D_b / denom)), denom = L (use_mu false) or mu n.
double expected_triangles_truncated(const DegreeSequence& seq, double epsilon, bool use_mu, double mu);

// Spearman rank correlation, average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct JointResult {
  // Order: rescaled pearson_ecm, clustering_cm, clustering_ecm.
  std::array<std::array<double, 3>, 3> empirical{};
  std::array<std::array<double, 3>, 3> limit{};
  std::size_t used = 0;
  std::size_t degenerate = 0;
  double max_abs_difference = 0.0;
  // Every limit triple has signs (-, +, +).
  bool limit_signs_hold = true;
};

// Replicas at the last configured size; statistics are fixed to the three
// coupled ones.
JointResult run_joint(const ExperimentConfig& config);

}  // namespace nullmodels
