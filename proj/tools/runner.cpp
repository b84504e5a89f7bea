#include "runner.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "nullmodels/statistics.hpp"

namespace nullmodels::cli {

namespace {

const std::set<std::string> kCommonKeys{"name", "kind", "assertions", "description"};

const std::map<std::string, std::set<std::string>> kKindKeys{
    {"scaling", {"model", "kernel", "gamma", "scale", "sizes", "replicas", "statistics", "normalization"}},
    {"distribution",
     {"model", "kernel", "gamma", "scale", "sizes", "replicas", "statistics", "normalization", "limit_samples",
      "limit_truncation"}},
    {"compare_models", {"models", "kernel", "gamma", "scale", "sizes", "replicas", "statistics", "normalization"}},
    {"joint", {"model", "gamma", "scale", "sizes", "replicas", "limit_samples", "limit_truncation"}},
    {"erased_sums", {"gamma", "scale", "sizes", "replicas"}},
    {"conditional_variance", {"gamma", "scale", "n", "pairings"}},
    {"edge_probability", {"gamma", "scale", "n", "pairs", "pairings"}},
    {"triangles_truncated", {"gamma", "scale", "n", "replicas", "epsilon"}},
};

std::string key_path(std::size_t index, const std::string& key) {
  return "experiments[" + std::to_string(index) + "]." + key;
}

template <typename T>
T get_or(const Json& e, const char* key, T fallback) {
  if (!e.contains(key)) return fallback;
  try {
    return e.at(key).get<T>();
  } catch (const Json::exception&) {
    throw SchemaError(std::string("key '") + key + "' has the wrong type");
  }
}

ExperimentConfig build_config(const Json& e, std::uint64_t seed, unsigned threads) {
  ExperimentConfig c;
  c.name = e.at("name").get<std::string>();
  c.model = model_from_name(get_or<std::string>(e, "model", "ecm"));
  c.kernel = get_or<std::string>(e, "kernel", c.kernel);
  c.gamma = get_or<double>(e, "gamma", c.gamma);
  c.scale = get_or<double>(e, "scale", c.scale);
  c.sizes = get_or<std::vector<std::size_t>>(e, "sizes", c.sizes);
  if (e.contains("n")) c.sizes = {get_or<std::size_t>(e, "n", 0)};
  c.replicas = get_or<std::size_t>(e, "replicas", c.replicas);
  for (const auto& s : get_or<std::vector<std::string>>(e, "statistics", {})) c.statistics.push_back(StatisticId::parse(s));
  c.normalization = normalization_from_name(get_or<std::string>(e, "normalization", "raw"));
  c.limit_samples = get_or<std::size_t>(e, "limit_samples", c.limit_samples);
  c.limit_truncation = get_or<std::size_t>(e, "limit_truncation", c.limit_truncation);
  c.seed = seed;
  c.threads = threads;
  return c;
}

void check_assertions(const Json& e, std::size_t index, std::vector<std::string>& problems) {
  if (!e.contains("assertions")) return;
  const Json& list = e.at("assertions");
  if (!list.is_array()) {
    problems.push_back(key_path(index, "assertions") + ": expected an array");
    return;
  }
  for (std::size_t a = 0; a < list.size(); ++a) {
    const std::string where = key_path(index, "assertions[" + std::to_string(a) + "]");
    const Json& x = list[a];
    if (!x.is_object()) {
      problems.push_back(where + ": expected an object");
      continue;
    }
    for (const auto& [k, v] : x.items())
      if (k != "metric" && k != "min" && k != "max" && k != "tag") problems.push_back(where + "." + k + ": unknown key");
    if (!x.contains("metric") || !x.at("metric").is_string()) problems.push_back(where + ".metric: required string");
    if (!x.contains("min") && !x.contains("max")) problems.push_back(where + ": needs min or max");
    for (const char* bound : {"min", "max"})
      if (x.contains(bound) && !x.at(bound).is_number())
        problems.push_back(where + "." + bound + ": expected a number");
    if (x.contains("tag") && !x.at("tag").is_string()) problems.push_back(where + ".tag: expected a string");
  }
}

std::string num(double v) { return std::isfinite(v) ? Json(v).dump() : std::string(); }

std::string scaling_csv(const std::map<StatisticId, ScalingResult>& results) {
  std::ostringstream out;
  out << "statistic,n,count,degenerate,median_abs,q25_abs,q75_abs,negative_fraction,slope,slope_se\n";
  for (const auto& [id, r] : results)
    for (const auto& s : r.sizes)
      out << id.str() << ',' << s.n << ',' << s.count << ',' << s.degenerate << ',' << num(s.median_abs) << ','
          << num(s.q25_abs) << ',' << num(s.q75_abs) << ',' << num(s.negative_fraction) << ',' << num(r.fit.slope)
          << ',' << num(r.fit.standard_error) << '\n';
  return out.str();
}

std::string quantile_csv(const std::vector<std::pair<std::string, std::pair<std::size_t, Quantiles>>>& rows) {
  std::ostringstream out;
  out << "source,count,q05,q25,q50,q75,q95\n";
  for (const auto& [name, row] : rows) {
    const auto& q = row.second;
    out << name << ',' << row.first << ',' << num(q.q05) << ',' << num(q.q25) << ',' << num(q.q50) << ','
        << num(q.q75) << ',' << num(q.q95) << '\n';
  }
  return out.str();
}

std::string metrics_csv(const Json& metrics) {
  std::ostringstream out;
  out << "metric,value\n";
  for (const auto& [k, v] : metrics.items()) out << k << ',' << (v.is_null() ? std::string() : v.dump()) << '\n';
  return out.str();
}

Json metric(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void add_scaling_metrics(Json& metrics, const std::map<StatisticId, ScalingResult>& results) {
  for (const auto& [id, r] : results) {
    metrics["slope." + id.str()] = metric(r.fit.slope);
    metrics["slope_se." + id.str()] = metric(r.fit.standard_error);
    for (const auto& s : r.sizes) {
      const std::string at = id.str() + "@" + std::to_string(s.n);
      metrics["median_abs." + at] = metric(s.median_abs);
      metrics["negative_fraction." + at] = metric(s.negative_fraction);
      metrics["degenerate." + at] = s.degenerate;
    }
  }
}

double max_quantile_relative_difference(const Quantiles& a, const Quantiles& b) {
  const std::array<std::pair<double, double>, 5> pairs{
      {{a.q05, b.q05}, {a.q25, b.q25}, {a.q50, b.q50}, {a.q75, b.q75}, {a.q95, b.q95}}};
  double worst = 0.0;
  for (const auto& [x, y] : pairs) worst = std::max(worst, std::abs(x - y) / std::abs(y));
  return worst;
}

double negative_fraction(const std::vector<double>& v) {
  std::size_t neg = 0;
  for (double x : v) neg += x < 0 ? 1 : 0;
  return v.empty() ? std::nan("") : static_cast<double>(neg) / static_cast<double>(v.size());
}

std::vector<std::string> record_lines(const std::vector<ReplicaRecord>& records, const std::string& name,
                                      const std::string& hash) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const auto& r : records) {
    Json j = to_json(r);
    j["experiment"] = name;
    j["config_hash"] = hash;
    lines.push_back(j.dump());
  }
  return lines;
}

}  // namespace

void validate_config(const Json& config) {
  std::vector<std::string> problems;
  if (!config.is_object()) throw SchemaError("config: top level must be an object");
  for (const auto& [k, v] : config.items())
    if (k != "seed" && k != "threads" && k != "experiments" && k != "description") problems.push_back(k + ": unknown key");
  if (config.contains("seed") && !config.at("seed").is_number_unsigned())
    problems.push_back("seed: expected a nonnegative integer");
  if (config.contains("threads") && !config.at("threads").is_number_unsigned())
    problems.push_back("threads: expected a nonnegative integer");
  if (!config.contains("experiments") || !config.at("experiments").is_array()) {
    problems.push_back("experiments: required array");
  } else {
    std::set<std::string> names;
    const Json& list = config.at("experiments");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Json& e = list[i];
      const std::size_t problems_before = problems.size();
      if (!e.is_object()) {
        problems.push_back("experiments[" + std::to_string(i) + "]: expected an object");
        continue;
      }
      if (!e.contains("name") || !e.at("name").is_string() || e.at("name").get<std::string>().empty()) {
        problems.push_back(key_path(i, "name") + ": required non-empty string");
      } else if (!names.insert(e.at("name").get<std::string>()).second) {
        problems.push_back(key_path(i, "name") + ": duplicate experiment name");
      }
      const auto kind_it = e.contains("kind") && e.at("kind").is_string()
                               ? kKindKeys.find(e.at("kind").get<std::string>())
                               : kKindKeys.end();
      if (kind_it == kKindKeys.end()) {
        problems.push_back(key_path(i, "kind") + ": required, one of scaling, distribution, compare_models, joint, "
                                                 "erased_sums, conditional_variance, edge_probability, "
                                                 "triangles_truncated");
        continue;
      }
      bool keys_ok = true;
      for (const auto& [k, v] : e.items())
        if (!kCommonKeys.contains(k) && !kind_it->second.contains(k)) {
          problems.push_back(key_path(i, k) + ": unknown key for kind " + kind_it->first);
          keys_ok = false;
        }
      check_assertions(e, i, problems);
      if (!keys_ok || problems.size() > problems_before) continue;
      try {
        ExperimentConfig c = build_config(e, 0, 1);
        if (kind_it->first == "compare_models") {
          const auto models = get_or<std::vector<std::string>>(e, "models", {});
          if (models.size() != 2) throw SchemaError("models: expected exactly two model names");
          for (const auto& m : models) {
            c.model = model_from_name(m);
            c.validate();
          }
        } else {
          c.validate();
        }
      } catch (const Error& err) {
        problems.push_back("experiments[" + std::to_string(i) + "]: " + err.what());
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "config schema violation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw SchemaError(msg);
  }
}

ExperimentOutput run_experiment(const Json& entry, std::uint64_t seed, unsigned threads,
                                const std::string& config_hash) {
  ExperimentOutput out;
  out.name = entry.at("name").get<std::string>();
  out.kind = entry.at("kind").get<std::string>();
  ExperimentConfig c = build_config(entry, seed, threads);
  Json metrics = Json::object();
  Json details;

  if (out.kind == "scaling") {
    const auto report = run_scaling(c);
    add_scaling_metrics(metrics, report.results);
    details = Json::array();
    for (const auto& [id, r] : report.results) details.push_back(to_json(r));
    out.jsonl = record_lines(report.records, out.name, config_hash);
    out.csv = scaling_csv(report.results);
  } else if (out.kind == "distribution") {
    const auto d = run_distribution(c);
    metrics["ks"] = metric(d.ks);
    metrics["degenerate"] = d.degenerate;
    metrics["negative_fraction"] = metric(negative_fraction(d.empirical));
    metrics["max_quantile_relative_difference"] =
        metric(max_quantile_relative_difference(d.empirical_quantiles, d.limit_quantiles));
    details = to_json(d);
    out.csv = quantile_csv({{"empirical", {d.empirical.size(), d.empirical_quantiles}},
                            {"limit", {d.limit.size(), d.limit_quantiles}}});
    out.jsonl = record_lines(d.records, out.name, config_hash);
  } else if (out.kind == "compare_models") {
    const auto models = entry.at("models").get<std::vector<std::string>>();
    if (c.statistics.size() != 1) throw ValidationError("compare_models: exactly one statistic expected");
    std::array<std::vector<double>, 2> samples;
    std::vector<std::pair<std::string, std::pair<std::size_t, Quantiles>>> rows;
    for (int m = 0; m < 2; ++m) {
      ExperimentConfig mc = c;
      mc.model = model_from_name(models[m]);
      mc.sizes = {c.sizes.back()};
      const auto records = run_replicas(mc);
      for (const auto& r : records) {
        const auto& v = r.values.at(c.statistics.front());
        if (v.value) samples[m].push_back(*v.value);
      }
      if (samples[m].empty()) throw ExperimentError("compare_models: every replica degenerate for " + models[m]);
      metrics["degenerate." + models[m]] = records.size() - samples[m].size();
      rows.push_back({models[m], {samples[m].size(), quantiles(samples[m])}});
      auto lines = record_lines(records, out.name + ":" + models[m], config_hash);
      out.jsonl.insert(out.jsonl.end(), lines.begin(), lines.end());
    }
    metrics["ks"] = metric(ks_two_sample(samples[0], samples[1]));
    details = {{"models", models}, {"statistic", c.statistics.front().str()}};
    out.csv = quantile_csv(rows);
  } else if (out.kind == "joint") {
    const auto j = run_joint(c);
    metrics["max_abs_difference"] = metric(j.max_abs_difference);
    metrics["limit_signs_hold"] = j.limit_signs_hold ? 1.0 : 0.0;
    metrics["degenerate"] = j.degenerate;
    const char* names[3] = {"pearson_ecm", "clustering_cm", "clustering_ecm"};
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const std::string pair = std::string(names[a]) + "~" + names[b];
        metrics["spearman_empirical." + pair] = metric(j.empirical[a][b]);
        metrics["spearman_limit." + pair] = metric(j.limit[a][b]);
      }
    details = to_json(j);
    out.csv = metrics_csv(metrics);
  } else if (out.kind == "erased_sums") {
    c.model = Model::ecm;
    const auto r = run_erased_sums(c);
    std::map<StatisticId, ScalingResult> results;
    for (const auto& s : r.stub_sums) results[s.statistic] = s;
    results[r.pair_sum.statistic] = r.pair_sum;
    add_scaling_metrics(metrics, results);
    details = Json::array();
    for (const auto& [id, s] : results) details.push_back(to_json(s));
    out.jsonl = record_lines(r.records, out.name, config_hash);
    out.csv = scaling_csv(results);
  } else if (out.kind == "conditional_variance") {
    const std::size_t pairings = get_or<std::size_t>(entry, "pairings", 10'000);
    Rng rng(replica_seed(seed, 0, 0));
    const auto seq = sample_sequence(c.law(), c.sizes.front(), rng);
    const auto v = run_conditional_variance(seq, pairings, stream_seed(seed, 2), threads);
    metrics["estimate"] = metric(v.estimate);
    metrics["prediction"] = metric(v.prediction);
    metrics["ratio"] = metric(v.ratio());
    metrics["prediction_with_loops"] = metric(v.prediction_with_loops);
    metrics["ratio_with_loops"] = metric(v.estimate / v.prediction_with_loops);
    details = to_json(v);
    out.csv = metrics_csv(metrics);
  } else if (out.kind == "edge_probability") {
    const std::size_t pairs = get_or<std::size_t>(entry, "pairs", 100);
    const std::size_t pairings = get_or<std::size_t>(entry, "pairings", 10'000);
    Rng rng(replica_seed(seed, 0, 0));
    const auto seq = sample_sequence(c.law(), c.sizes.front(), rng);
    const auto check = check_edge_probability(seq, pairs, pairings, stream_seed(seed, 3));
    metrics["p95_abs_deviation"] = check.p95_abs_deviation;
    metrics["max_abs_deviation"] = check.max_abs_deviation;
    metrics["weighted_deviation"] = check.weighted_deviation;
    metrics["hub_deviation"] = check.hub_pair.deviation();
    details = to_json(check);
    out.csv = metrics_csv(metrics);
  } else if (out.kind == "triangles_truncated") {
    const double epsilon = get_or<double>(entry, "epsilon", 0.2);
    const double mu = c.law().mean();
    std::vector<double> rel(c.replicas), ratio(c.replicas);
    Json records = Json::array();
    for (std::size_t r = 0; r < c.replicas; ++r) {
      const std::uint64_t s = replica_seed(seed, 0, r);
      Rng degree_rng(s), graph_rng(stream_seed(s, 1));
      const auto seq = sample_sequence(c.law(), c.sizes.front(), degree_rng);
      const double g = expected_triangles_truncated(seq, epsilon, false, mu);
      const double f = expected_triangles_truncated(seq, epsilon, true, mu);
      const double t = triangle_count(erase(generate_cm(seq, graph_rng)).graph);
      rel[r] = f > 0 ? std::abs(g - f) / f : std::nan("");
      ratio[r] = g > 0 ? t / g : std::nan("");
      out.jsonl.push_back(Json({{"experiment", out.name},
                                {"config_hash", config_hash},
                                {"replica", r},
                                {"seed", s},
                                {"g_sum", g},
                                {"f_sum", f},
                                {"ecm_triangles", t}})
                              .dump());
    }
    auto finite = [](std::vector<double> v) {
      std::erase_if(v, [](double x) { return !std::isfinite(x); });
      return v;
    };
    const auto rel_ok = finite(rel), ratio_ok = finite(ratio);
    metrics["median_gf_relative_difference"] = rel_ok.empty() ? Json(nullptr) : metric(quantile(rel_ok, 0.5));
    metrics["median_triangle_ratio"] = ratio_ok.empty() ? Json(nullptr) : metric(quantile(ratio_ok, 0.5));
    metrics["empty_band_replicas"] = c.replicas - ratio_ok.size();
    details = Json::object();
    out.csv = metrics_csv(metrics);
  } else {
    throw SchemaError("unknown experiment kind '" + out.kind + "'");
  }

  Json assertions = Json::array();
  if (entry.contains("assertions")) {
    for (const auto& a : entry.at("assertions")) {
      AssertionOutcome o;
      o.metric = a.at("metric").get<std::string>();
      o.tag = a.value("tag", "");
      o.min = a.value("min", Json(nullptr));
      o.max = a.value("max", Json(nullptr));
      o.value = metrics.contains(o.metric) ? metrics.at(o.metric) : Json(nullptr);
      o.passed = o.value.is_number();
      if (o.passed && o.min.is_number()) o.passed = o.value.get<double>() >= o.min.get<double>();
      if (o.passed && o.max.is_number()) o.passed = o.value.get<double>() <= o.max.get<double>();
      out.passed = out.passed && o.passed;
      assertions.push_back(
          {{"metric", o.metric}, {"tag", o.tag}, {"min", o.min}, {"max", o.max}, {"value", o.value}, {"passed", o.passed}});
      out.assertions.push_back(std::move(o));
    }
  }

  out.summary = {{"experiment", out.name},
                 {"kind", out.kind},
                 {"config_hash", config_hash},
                 {"seed", seed},
                 {"metrics", metrics},
                 {"assertions", assertions},
                 {"passed", out.passed},
                 {"details", details}};
  return out;
}

}  // namespace nullmodels::cli
