#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "nullmodels/experiments.hpp"
#include "nullmodels/generators.hpp"
#include "nullmodels/integrals.hpp"
#include "nullmodels/statistics.hpp"

namespace nullmodels {

using Json = nlohmann::json;

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// SHA-256 of the compact dump of `config`. Object keys are kept sorted, so
// the hash does not depend on the key order of the source text.
std::string config_hash(const Json& config);

// Big integers are written as decimal strings.
Json to_json(const PearsonBreakdown& p);
Json to_json(const ClusteringResult& c);
Json to_json(const ErasureReport& r);
Json to_json(const Quantiles& q);
Json to_json(const ScalingResult& s);
Json to_json(const DistributionResult& d, bool include_samples = false);
Json to_json(const TripleIntegralResult& r);
Json to_json(const ConditionalVariance& v);
Json to_json(const EdgeProbabilityCheck& c);
Json to_json(const JointResult& j);
Json to_json(const ReplicaRecord& r);

}  // namespace nullmodels
