#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nullmodels/error.hpp"
#include "nullmodels/io.hpp"

namespace nullmodels::cli {

// Config-file schema violation; the message lists every offending key.
class SchemaError : public Error {
 public:
  using Error::Error;
};

struct AssertionOutcome {
  std::string metric;
  std::string tag;
  Json min;
  Json max;
  Json value;
  bool passed = false;
};

struct ExperimentOutput {
  std::string name;
  std::string kind;
  Json summary;                   // deterministic in (config, seed)
  std::vector<std::string> jsonl;  // one record per replica, may be empty
  std::string csv;
  std::vector<AssertionOutcome> assertions;
  bool passed = true;
};

// Checks the whole config document ({"seed", "threads", "experiments": [...]})
// and throws SchemaError listing every problem found.
void validate_config(const Json& config);

// Runs one entry of "experiments". `config_hash` is embedded in every output.
ExperimentOutput run_experiment(const Json& entry, std::uint64_t seed, unsigned threads,
                                const std::string& config_hash);

}  // namespace nullmodels::cli
