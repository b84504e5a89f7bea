#include "nullmodels/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include "nullmodels/error.hpp"

namespace nullmodels {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::string hex;
  hex.reserve(2 * length);
  char buf[3];
  for (unsigned i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const Json& config) { return sha256_hex(config.dump()); }

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const PearsonBreakdown& p) {
  return {{"r", p.r},
          {"r_plus", p.r_plus},
          {"r_minus", p.r_minus},
          {"numerator_edge_sum", p.numerator_edge_sum.str()},
          {"s2", p.s2.str()},
          {"s3", p.s3.str()},
          {"l", p.l}};
}

Json to_json(const ClusteringResult& c) {
  return {{"triangles", c.triangles}, {"wedge_sum", c.wedge_sum}, {"c_global", c.c_global}};
}

Json to_json(const ErasureReport& r) {
  Json pairs = Json::array();
  for (const auto& z : r.z_pair) pairs.push_back({z.u, z.v, z.count});
  return {{"z_total", r.z_total}, {"z_pair", pairs}, {"removed_stubs", r.removed_stubs}, {"y_paper", r.y_paper}};
}

Json to_json(const Quantiles& q) {
  return {{"q05", number(q.q05)}, {"q25", number(q.q25)}, {"q50", number(q.q50)}, {"q75", number(q.q75)},
          {"q95", number(q.q95)}};
}

Json to_json(const ScalingResult& s) {
  Json sizes = Json::array();
  for (const auto& z : s.sizes)
    sizes.push_back({{"n", z.n},
                     {"count", z.count},
                     {"degenerate", z.degenerate},
                     {"median_abs", number(z.median_abs)},
                     {"q25_abs", number(z.q25_abs)},
                     {"q75_abs", number(z.q75_abs)},
                     {"negative_fraction", number(z.negative_fraction)}});
  return {{"statistic", s.statistic.str()},
          {"sizes", sizes},
          {"slope", number(s.fit.slope)},
          {"intercept", number(s.fit.intercept)},
          {"slope_se", number(s.fit.standard_error)}};
}

Json to_json(const DistributionResult& d, bool include_samples) {
  Json j = {{"statistic", d.statistic.str()},
            {"ks", number(d.ks)},
            {"empirical_count", d.empirical.size()},
            {"limit_count", d.limit.size()},
            {"degenerate", d.degenerate},
            {"empirical_quantiles", to_json(d.empirical_quantiles)},
            {"limit_quantiles", to_json(d.limit_quantiles)}};
  if (include_samples) j["empirical"] = d.empirical;
  return j;
}

Json to_json(const TripleIntegralResult& r) {
  Json table = Json::array();
  for (const auto& row : r.table)
    table.push_back({{"level", row.level}, {"nodes", row.nodes}, {"value", number(row.value)}, {"change", number(row.change)}});
  return {{"value", number(r.value)},
          {"error", number(r.error)},
          {"truncation_error", number(r.truncation_error)},
          {"convergence", table}};
}

Json to_json(const ConditionalVariance& v) {
  return {{"n", v.n},
          {"pairings", v.pairings},
          {"mean_r", number(v.mean_r)},
          {"estimate", number(v.estimate)},
          {"prediction", number(v.prediction)},
          {"ratio", number(v.ratio())},
          {"prediction_with_loops", number(v.prediction_with_loops)}};
}

namespace {

Json pair_json(const PairProbability& p) {
  return {{"i", p.i},
          {"j", p.j},
          {"d_i", p.d_i},
          {"d_j", p.d_j},
          {"empirical", p.empirical},
          {"approximation", p.approximation},
          {"deviation", p.deviation()}};
}

}  // namespace

Json to_json(const EdgeProbabilityCheck& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) pairs.push_back(pair_json(p));
  return {{"pairs", pairs},
          {"hub_pair", pair_json(c.hub_pair)},
          {"p95_abs_deviation", c.p95_abs_deviation},
          {"max_abs_deviation", c.max_abs_deviation},
          {"weighted_deviation", c.weighted_deviation}};
}

Json to_json(const JointResult& j) {
  return {{"statistics", {"pearson_ecm", "clustering_cm", "clustering_ecm"}},
          {"empirical_spearman", j.empirical},
          {"limit_spearman", j.limit},
          {"used", j.used},
          {"degenerate", j.degenerate},
          {"max_abs_difference", j.max_abs_difference},
          {"limit_signs_hold", j.limit_signs_hold}};
}

Json to_json(const ReplicaRecord& r) {
  Json values = Json::object(), reasons = Json::object();
  for (const auto& [id, v] : r.values) {
    values[id.str()] = v.value ? number(*v.value) : Json(nullptr);
    if (!v.value) reasons[id.str()] = v.reason;
  }
  Json j = {{"n", r.n}, {"size_index", r.size_index}, {"replica", r.replica}, {"seed", r.seed}, {"values", values}};
  if (!reasons.empty()) j["degenerate"] = reasons;
  return j;
}

}  // namespace nullmodels
