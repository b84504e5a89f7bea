#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "nullmodels/degree_model.hpp"
#include "nullmodels/generators.hpp"
#include "nullmodels/integrals.hpp"
#include "nullmodels/io.hpp"
#include "nullmodels/stable_limits.hpp"
#include "nullmodels/statistics.hpp"
#include "runner.hpp"

#ifndef NULLMODELS_VERSION
#define NULLMODELS_VERSION "0.0.0"
#endif

namespace nullmodels::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("NULLMODELS_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long s = std::strtoull(v, &end, 10);
  if (errno != 0 || *end != '\0' || *v == '-') throw UsageError("NULLMODELS_SEED must be a nonnegative integer");
  return s;
}

void check_gamma(double gamma) {
  if (!(gamma > 1.0 && gamma < 2.0)) throw UsageError("--gamma must lie in the open interval (1,2)");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

std::string format_real(double v) { return Json(v).dump(); }

struct GenerateArgs {
  std::string model;
  double gamma = 1.5;
  double scale = 1.0;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  std::string kernel = "poisson";
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  check_gamma(a.gamma);
  if (!(a.scale > 0.0)) throw UsageError("--scale must be positive");
  if (a.n < 1) throw UsageError("--n must be at least 1");
  Model model;
  try {
    model = model_from_name(a.model);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  std::optional<ConnectionKernel> kernel;
  if (model == Model::irg) {
    try {
      kernel = ConnectionKernel::from_name(a.kernel);
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
  }
  const std::uint64_t seed = a.seed ? *a.seed : env_seed().value_or(1);

  Json params = {{"command", "generate"}, {"model", a.model}, {"gamma", a.gamma}, {"scale", a.scale},
                 {"n", a.n},              {"seed", seed}};
  if (kernel) params["kernel"] = kernel->name();
  const std::string hash = config_hash(params);

  // Same streams as replica `seed` of an experiment.
  Rng degree_rng(seed), graph_rng(stream_seed(seed, 1));
  const DegreeLaw law{a.gamma, a.scale};
  const DegreeSequence seq = sample_sequence(law, a.n, degree_rng);

  std::map<std::string, std::string> header{{"model", a.model},
                                            {"gamma", format_real(a.gamma)},
                                            {"scale", format_real(a.scale)},
                                            {"seed", std::to_string(seed)},
                                            {"config_hash", hash},
                                            {"version", NULLMODELS_VERSION}};
  MultiGraph graph;
  std::optional<ErasureReport> report;
  if (model == Model::irg) {
    header["kernel"] = kernel->name();
    graph = generate_irg(make_sequence(seq.unadjusted()), *kernel, graph_rng, law.mean());
  } else {
    header["parity_adjusted"] = seq.parity_adjusted ? "1" : "0";
    graph = generate_cm(seq, graph_rng);
    if (model == Model::ecm) {
      auto e = erase(graph);
      graph = std::move(e.graph);
      report = std::move(e.report);
    }
  }

  std::ostringstream text;
  write_edge_list(text, graph, header);
  write_file(a.out, text.str());
  if (report) {
    Json j = to_json(*report);
    j["config_hash"] = hash;
    write_file(a.out + ".erasure.json", j.dump() + "\n");
  }
  out << Json({{"out", a.out}, {"config_hash", hash}, {"vertices", graph.vertex_count()}, {"edges", graph.edge_count()}})
             .dump()
      << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& path, const std::string& out_path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  const EdgeListFile file = read_edge_list(in);
  const MultiGraph& g = file.graph;

  Json j;
  const auto hash = file.header.find("config_hash");
  j["config_hash"] = hash == file.header.end() ? Json(nullptr) : Json(hash->second);
  j["n"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["simple"] = g.is_simple();
  try {
    j["pearson"] = to_json(pearson(g));
  } catch (const DegenerateStatistic&) {
    j["pearson"] = nullptr;
    j["pearson_reason"] = "degenerate denominator";
  }
  try {
    j["clustering"] = to_json(clustering_global(g));
  } catch (const DegenerateStatistic&) {
    j["clustering"] = nullptr;
    j["clustering_reason"] = "no wedges";
    j["triangles"] = triangle_count(g);
  }
  if (g.is_simple()) {
    try {
      j["clustering_average"] = clustering_average(g);
    } catch (const DegenerateStatistic&) {
      j["clustering_average"] = nullptr;
      j["clustering_average_reason"] = "no vertex of degree at least 2";
    }
  } else {
    j["clustering_average"] = nullptr;
    j["clustering_average_reason"] = "multigraph";
  }
  const std::vector<int> powers{1, 2, 3, 4, 6};
  Json sums = Json::object();
  for (const auto& [p, v] : degree_power_sums(g.degrees(), powers)) sums[std::to_string(p)] = v.str();
  j["power_sums"] = sums;

  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    out << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, std::optional<unsigned> threads_flag,
                   std::optional<std::uint64_t> seed_flag, const std::string& out_dir, std::ostream& out,
                   std::ostream& err) {
  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config " + config_path);
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    validate_config(config);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }

  const std::string hash = config_hash(config);
  std::uint64_t seed = config.value("seed", std::uint64_t{1});
  if (const auto s = env_seed()) seed = *s;
  if (seed_flag) seed = *seed_flag;
  const unsigned threads = threads_flag.value_or(config.value("threads", 1u));

  std::filesystem::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  Json outputs = Json::object();
  bool passed = true;
  for (const auto& entry : config.at("experiments")) {
    const ExperimentOutput result = run_experiment(entry, seed, std::max(1u, threads), hash);
    const std::filesystem::path base = std::filesystem::path(out_dir) / result.name;
    Json files = {{"summary", base.string() + ".summary.json"}, {"csv", base.string() + ".csv"}};
    write_file(base.string() + ".summary.json", result.summary.dump(2) + "\n");
    write_file(base.string() + ".csv", result.csv);
    if (!result.jsonl.empty()) {
      std::string lines;
      for (const auto& l : result.jsonl) lines += l + "\n";
      write_file(base.string() + ".jsonl", lines);
      files["records"] = base.string() + ".jsonl";
    }
    outputs[result.name] = files;
    for (const auto& a : result.assertions)
      if (!a.passed)
        err << "assertion failed in " << result.name << ": " << a.metric << " = " << a.value.dump() << " not in ["
            << a.min.dump() << ", " << a.max.dump() << "]" << (a.tag.empty() ? "" : " (" + a.tag + ")") << '\n';
    passed = passed && result.passed;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::time_t now = std::time(nullptr);
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  Json manifest = {{"config_hash", hash},         {"config_path", config_path}, {"master_seed", seed},
                   {"version", NULLMODELS_VERSION}, {"threads", threads},        {"started_at", stamp.str()},
                   {"wall_clock_seconds", seconds}, {"outputs", outputs},        {"passed", passed}};
  write_file((std::filesystem::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  out << Json({{"manifest", (std::filesystem::path(out_dir) / "manifest.json").string()}, {"passed", passed}}).dump()
      << '\n';
  return passed ? kExitOk : kExitFailure;
}

int cmd_integrate(double gamma, const std::string& kernel_name, double epsilon, double tolerance, std::ostream& out) {
  check_gamma(gamma);
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw UsageError("--epsilon must lie in [0,1)");
  if (!(tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  TripleIntegralSpec spec;
  spec.gamma = gamma;
  spec.tolerance = tolerance;
  try {
    spec.kernel = ConnectionKernel::from_name(kernel_name);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (epsilon > 0.0) spec.truncate(epsilon);
  Json j;
  try {
    j = to_json(triple_integral(spec));
  } catch (const QuadratureError& e) {
    out << Json({{"error", e.what()}, {"best_value", e.best_value()}, {"error_bound", e.error_bound()}}).dump(2)
        << '\n';
    return kExitFailure;
  }
  j["gamma"] = gamma;
  j["kernel"] = spec.kernel.name();
  j["epsilon"] = epsilon;
  j["tolerance"] = tolerance;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_sample_limits(double gamma, std::size_t count, std::size_t truncation, std::optional<std::uint64_t> seed_flag,
                      unsigned threads, const std::string& out_path, std::ostream& out) {
  check_gamma(gamma);
  if (count < 1) throw UsageError("--count must be at least 1");
  if (truncation < 100) throw UsageError("--truncation must be at least 100");
  const std::uint64_t seed = seed_flag ? *seed_flag : env_seed().value_or(1);
  LimitModel model;
  model.gamma = gamma;
  model.mu = DegreeLaw{gamma, 1.0}.mean();
  model.a_gamma = a_gamma(gamma).value;
  LimitSamplerConfig config;
  config.gamma = gamma;
  config.truncation = truncation;
  const auto samples = sample_limits(config, model, count, seed, std::max(1u, threads));

  std::ostringstream csv;
  csv << "s2,s3,s4,s6,pearson_ecm,clustering_cm,clustering_cm_ctilde,clustering_ecm\n";
  for (const auto& s : samples) {
    csv << format_real(s.s[0]) << ',' << format_real(s.s[1]) << ',' << format_real(s.s[2]) << ','
        << format_real(s.s[3]) << ',' << format_real(s.composed.pearson_ecm) << ','
        << format_real(s.composed.clustering_cm) << ',' << format_real(s.composed.clustering_cm_ctilde) << ','
        << format_real(s.composed.clustering_ecm) << '\n';
  }
  if (out_path.empty())
    out << csv.str();
  else
    write_file(out_path, csv.str());
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-graph null models: generation, statistics, limit laws and Monte Carlo experiments",
               "nullmodels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NULLMODELS_VERSION);

  GenerateArgs gen;
  std::uint64_t seed_value = 0;
  auto* generate = app.add_subcommand("generate", "Generate a cm, ecm or irg graph as an edge list");
  generate->add_option("--model", gen.model, "cm, ecm or irg")->required();
  generate->add_option("--gamma", gen.gamma, "Tail exponent in (1,2)");
  generate->add_option("--scale", gen.scale, "Tail constant c");
  generate->add_option("--n", gen.n, "Number of vertices")->required();
  auto* gen_seed = generate->add_option("--seed", seed_value, "Seed (default: NULLMODELS_SEED or 1)");
  generate->add_option("--kernel", gen.kernel, "chung_lu, poisson or max_entropy (irg)");
  generate->add_option("--out", gen.out, "Edge-list output path")->required();

  std::string stats_path, stats_out;
  auto* stats = app.add_subcommand("stats", "Pearson, clustering and degree power sums of an edge-list file");
  stats->add_option("graph", stats_path, "Edge-list file")->required();
  stats->add_option("--out", stats_out, "Write JSON here instead of stdout");

  std::string config_path, out_dir = "results";
  unsigned threads_value = 1;
  auto* experiment = app.add_subcommand("experiment", "Run the experiments of a JSON config");
  experiment->add_option("--config", config_path, "Config file")->required();
  auto* exp_threads = experiment->add_option("--threads", threads_value, "Worker threads");
  auto* exp_seed = experiment->add_option("--seed", seed_value, "Master seed (overrides config and NULLMODELS_SEED)");
  experiment->add_option("--out", out_dir, "Output directory");

  double int_gamma = 1.5, epsilon = 0.0, tolerance = 1e-4;
  std::string int_kernel = "poisson";
  auto* integrate = app.add_subcommand("integrate", "Evaluate the triple integral of the clustering limit");
  integrate->add_option("--gamma", int_gamma, "Tail exponent in (1,2)");
  integrate->add_option("--kernel", int_kernel, "chung_lu, poisson or max_entropy");
  integrate->add_option("--epsilon", epsilon, "Truncate every axis to [epsilon, 1/epsilon]; 0 for none");
  integrate->add_option("--tolerance", tolerance, "Absolute tolerance");

  double lim_gamma = 1.5;
  std::size_t count = 1000, truncation = 100'000;
  std::string lim_out;
  unsigned lim_threads = 1;
  auto* limits = app.add_subcommand("sample-limits", "Export joint limit-variable samples as CSV");
  limits->add_option("--gamma", lim_gamma, "Tail exponent in (1,2)");
  limits->add_option("--count", count, "Number of samples");
  limits->add_option("--truncation", truncation, "Terms of the Gamma series");
  auto* lim_seed = limits->add_option("--seed", seed_value, "Seed (default: NULLMODELS_SEED or 1)");
  limits->add_option("--threads", lim_threads, "Worker threads");
  limits->add_option("--out", lim_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << NULLMODELS_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      if (*gen_seed) gen.seed = seed_value;
      return cmd_generate(gen, out);
    }
    if (stats->parsed()) return cmd_stats(stats_path, stats_out, out);
    if (experiment->parsed())
      return cmd_experiment(config_path, *exp_threads ? std::optional<unsigned>(threads_value) : std::nullopt,
                            *exp_seed ? std::optional<std::uint64_t>(seed_value) : std::nullopt, out_dir, out, err);
    if (integrate->parsed()) return cmd_integrate(int_gamma, int_kernel, epsilon, tolerance, out);
    if (limits->parsed())
      return cmd_sample_limits(lim_gamma, count, truncation,
                               *lim_seed ? std::optional<std::uint64_t>(seed_value) : std::nullopt, lim_threads,
                               lim_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace nullmodels::cli
