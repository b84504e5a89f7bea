#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nullmodels/degree_model.hpp"
#include "nullmodels/multigraph.hpp"
#include "nullmodels/rng.hpp"

namespace nullmodels {

// Removed multiplicity Z_ij of one vertex pair (u <= v; loops keyed (u,u)).
struct PairCount {
  Vertex u = 0;
  Vertex v = 0;
  std::uint64_t count = 0;
};

struct ErasureReport {
  // Z_n = sum_i Z_ii + sum_{i<j} Z_ij.
  std::uint64_t z_total = 0;
  // Nonzero Z_ij, sorted by (u, v).
  std::vector<PairCount> z_pair;
  // Y*_i = D_i - D^_i; a removed loop contributes 2.
  std::vector<std::int64_t> removed_stubs;
  // Y_i = sum_j Z_ij, the counter in which a removed loop contributes 1.
  std::vector<std::int64_t> y_paper;

  std::uint64_t z(Vertex i, Vertex j) const;
};

struct Erasure {
  MultiGraph graph;  // simple
  ErasureReport report;
};

// Uniform perfect matching of the stubs of `seq` (Fisher-Yates, then pair
// consecutive stubs). Throws InvalidInput if the stub total is odd.
MultiGraph generate_cm(const DegreeSequence& seq, Rng& rng);
MultiGraph generate_cm(const DegreeSequence& seq, std::uint64_t seed);

// Stub pairing only: entry 2k and 2k+1 of the result form an edge.
std::vector<Vertex> pair_stubs(const DegreeSequence& seq, Rng& rng);

// Drops loops and collapses multi-edges. The input is left unchanged.
Erasure erase(const MultiGraph& g);

// Connection profile q(u) = u h(u) of a rank-1 inhomogeneous random graph.
enum class KernelKind { chung_lu, poisson, max_entropy, custom };

class ConnectionKernel {
 public:
  static ConnectionKernel chung_lu();     // min(u, 1)
  static ConnectionKernel poisson();      // 1 - exp(-u)
  static ConnectionKernel max_entropy();  // u / (1 + u)
  static ConnectionKernel custom(std::string name, std::function<double(double)> q);
  // "chung_lu", "poisson", "max_entropy"; throws InvalidInput otherwise.
  static ConnectionKernel from_name(const std::string& name);

  KernelKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  double q(double u) const;
  // q(u)/u, with h(0) = 1.
  double h(double u) const;

 private:
  KernelKind kind_ = KernelKind::chung_lu;
  std::string name_ = "chung_lu";
  std::function<double(double)> custom_;
};

// Clauses of the kernel class violated on a logarithmic grid of u (empty if
// none): h(0)=1, h nonincreasing, h -> 0, q nondecreasing, q -> 1,
// q <= min(u,1).
std::vector<std::string> kernel_violations(const ConnectionKernel& kernel);
// Throws ValidationError listing every violated clause.
void validate_kernel(const ConnectionKernel& kernel);

// q(w_i w_j / (mu n)) clamped to [0, 1].
double connection_probability(const ConnectionKernel& kernel, double w_i, double w_j, double mu, double n);

// Rank-1 inhomogeneous random graph: each pair i != j independently present
// with probability q(w_i w_j / (mu n)). Rows are visited in decreasing weight
// order and absent pairs skipped geometrically, which keeps every pair's
// marginal probability exact. mu defaults to the mean weight.
MultiGraph generate_irg(const DegreeSequence& weights, const ConnectionKernel& kernel, Rng& rng,
                        std::optional<double> mu = std::nullopt);
MultiGraph generate_irg(const DegreeSequence& weights, const ConnectionKernel& kernel, std::uint64_t seed,
                        std::optional<double> mu = std::nullopt);

}  // namespace nullmodels
