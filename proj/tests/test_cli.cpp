#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "nullmodels/io.hpp"

namespace fs = std::filesystem;
using nullmodels::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "nullmodels");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = nullmodels::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct ScratchDirs {
  std::vector<fs::path> dirs;
  ~ScratchDirs() {
    std::error_code ec;
    for (const auto& d : dirs) fs::remove_all(d, ec);
  }
};

fs::path scratch(const std::string& name) {
  static ScratchDirs registry;
  const fs::path dir = fs::temp_directory_path() / ("nullmodels_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  registry.dirs.push_back(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("generate is byte reproducible") {
  const auto dir = scratch("generate");
  const auto a = (dir / "a.el").string(), b = (dir / "b.el").string();
  for (const char* model : {"cm", "ecm", "irg"}) {
    REQUIRE(run({"generate", "--model", model, "--gamma", "1.5", "--n", "1000", "--seed", "7", "--out", a}).code == 0);
    REQUIRE(run({"generate", "--model", model, "--gamma", "1.5", "--n", "1000", "--seed", "7", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("#config_hash") != std::string::npos);
  }
  CHECK(fs::exists(a + ".erasure.json"));
  CHECK(slurp(a + ".erasure.json") == slurp(b + ".erasure.json"));

  run({"generate", "--model", "cm", "--n", "1000", "--seed", "8", "--out", b});
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("generate validates flags") {
  const auto dir = scratch("flags");
  const auto r = run({"generate", "--model", "cm", "--gamma", "2.5", "--n", "10", "--out", (dir / "g.el").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("(1,2)") != std::string::npos);
  CHECK(run({"generate", "--model", "er", "--n", "10", "--out", (dir / "g.el").string()}).code == 2);
  CHECK(run({"generate", "--model", "cm", "--n", "10"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("irg header records the kernel") {
  const auto dir = scratch("irg");
  const auto path = (dir / "g.el").string();
  REQUIRE(run({"generate", "--model", "irg", "--kernel", "poisson", "--n", "500", "--seed", "3", "--out", path}).code == 0);
  CHECK(slurp(path).find("#kernel poisson") != std::string::npos);
  CHECK(run({"generate", "--model", "irg", "--kernel", "nope", "--n", "500", "--out", path}).code == 2);
}

TEST_CASE("stats") {
  const auto dir = scratch("stats");
  write(dir / "k3.el", "#n 3\n0 1 1\n1 2 1\n0 2 1\n");
  const auto r = run({"stats", (dir / "k3.el").string()});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["pearson"].is_null());
  CHECK(j["pearson_reason"] == "degenerate denominator");
  CHECK(j["clustering"]["c_global"] == 1.0);
  CHECK(j["power_sums"]["2"] == "12");

  write(dir / "bad.el", "#n 3\n0 1 1\n1 two 1\n");
  const auto bad = run({"stats", (dir / "bad.el").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(run({"stats", (dir / "missing.el").string()}).code == 1);

  const auto g = (dir / "g.el").string();
  REQUIRE(run({"generate", "--model", "ecm", "--n", "2000", "--seed", "5", "--out", g}).code == 0);
  const auto s1 = run({"stats", g}), s2 = run({"stats", g});
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  CHECK(Json::parse(s1.out)["config_hash"].is_string());
}

TEST_CASE("experiment command") {
  const auto dir = scratch("experiment");
  write(dir / "empty.json", R"({"seed": 3, "experiments": []})");
  const auto empty = run({"experiment", "--config", (dir / "empty.json").string(), "--out", (dir / "empty").string()});
  CHECK(empty.code == 0);
  CHECK(fs::exists(dir / "empty" / "manifest.json"));
  CHECK(std::distance(fs::directory_iterator(dir / "empty"), fs::directory_iterator{}) == 1);

  const std::string scaling = R"({"seed": 5, "experiments": [{
      "name": "z", "kind": "scaling", "model": "ecm", "gamma": 1.5, "sizes": [500, 1000, 2000],
      "replicas": 6, "statistics": ["erased_edges", "pearson_abs"],
      "assertions": [{"metric": "slope.erased_edges", "min": 10, "max": 11, "tag": "erased-edge exponent"}]}]})";
  write(dir / "scaling.json", scaling);
  const auto failed = run({"experiment", "--config", (dir / "scaling.json").string(), "--out", (dir / "s1").string()});
  CHECK(failed.code == 1);
  CHECK(failed.err.find("erased-edge exponent") != std::string::npos);
  const auto summary = Json::parse(slurp(dir / "s1" / "z.summary.json"));
  CHECK(summary["passed"] == false);
  CHECK(summary["assertions"][0]["tag"] == "erased-edge exponent");
  CHECK(summary["config_hash"].is_string());
  CHECK(fs::exists(dir / "s1" / "z.jsonl"));
  CHECK(fs::exists(dir / "s1" / "z.csv"));

  run({"experiment", "--config", (dir / "scaling.json").string(), "--threads", "1", "--out", (dir / "t1").string()});
  run({"experiment", "--config", (dir / "scaling.json").string(), "--threads", "4", "--out", (dir / "t4").string()});
  CHECK(slurp(dir / "t1" / "z.summary.json") == slurp(dir / "t4" / "z.summary.json"));
  CHECK(slurp(dir / "t1" / "z.jsonl") == slurp(dir / "t4" / "z.jsonl"));
  CHECK(slurp(dir / "t1" / "z.csv") == slurp(dir / "t4" / "z.csv"));

  // --seed beats NULLMODELS_SEED beats the config.
  ::setenv("NULLMODELS_SEED", "99", 1);
  run({"experiment", "--config", (dir / "scaling.json").string(), "--out", (dir / "env").string()});
  run({"experiment", "--config", (dir / "scaling.json").string(), "--seed", "5", "--out", (dir / "flag").string()});
  ::unsetenv("NULLMODELS_SEED");
  CHECK(Json::parse(slurp(dir / "env" / "z.summary.json"))["seed"] == 99);
  CHECK(slurp(dir / "flag" / "z.summary.json") == slurp(dir / "t1" / "z.summary.json"));

  write(dir / "schema.json", R"({"experiments": [{"name": "x", "kind": "scaling", "gama": 1.5, "colour": 1,
      "statistics": ["pearson_abs"]}]})");
  const auto schema = run({"experiment", "--config", (dir / "schema.json").string(), "--out", (dir / "x").string()});
  CHECK(schema.code == 2);
  CHECK(schema.err.find("gama") != std::string::npos);
  CHECK(schema.err.find("colour") != std::string::npos);

  write(dir / "broken.json", "{not json");
  CHECK(run({"experiment", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("config hash ignores key order") {
  const auto a = Json::parse(R"({"b": 1, "a": [1, 2], "c": {"y": 1, "x": 2}})");
  const auto b = Json::parse(R"({"c": {"x": 2, "y": 1}, "a": [1, 2], "b": 1})");
  CHECK(nullmodels::config_hash(a) == nullmodels::config_hash(b));
  CHECK(nullmodels::config_hash(a).size() == 64);
}

TEST_CASE("integrate and sample-limits") {
  const auto r = run({"integrate", "--gamma", "1.5"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(std::abs(j["value"].get<double>() - 56.4845) < 1e-3);
  CHECK(j["convergence"].is_array());
  CHECK(run({"integrate", "--gamma", "3"}).code == 2);

  const auto a = run({"sample-limits", "--count", "20", "--truncation", "200", "--seed", "4"});
  const auto b = run({"sample-limits", "--count", "20", "--truncation", "200", "--seed", "4", "--threads", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 21);
}
