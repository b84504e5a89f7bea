#include "nullmodels/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nullmodels/error.hpp"

namespace nullmodels {

std::uint64_t ErasureReport::z(Vertex i, Vertex j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(z_pair.begin(), z_pair.end(), std::pair{i, j},
                                   [](const PairCount& p, const std::pair<Vertex, Vertex>& key) {
                                     return p.u != key.first ? p.u < key.first : p.v < key.second;
                                   });
  return it != z_pair.end() && it->u == i && it->v == j ? it->count : 0;
}

std::vector<Vertex> pair_stubs(const DegreeSequence& seq, Rng& rng) {
  if (seq.total % 2 != 0) throw InvalidInput("configuration model: stub total must be even");
  std::vector<Vertex> stubs;
  stubs.reserve(static_cast<std::size_t>(seq.total));
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    if (seq.values[i] < 0) throw InvalidInput("configuration model: negative degree");
    stubs.insert(stubs.end(), static_cast<std::size_t>(seq.values[i]), static_cast<Vertex>(i));
  }
  if (stubs.size() != static_cast<std::size_t>(seq.total))
    throw InvalidInput("configuration model: total does not match the degree values");
  fisher_yates(stubs.data(), stubs.size(), rng);
  return stubs;
}

MultiGraph generate_cm(const DegreeSequence& seq, Rng& rng) {
  const auto stubs = pair_stubs(seq, rng);
  std::vector<std::pair<Vertex, Vertex>> pairs(stubs.size() / 2);
  for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] = {stubs[2 * k], stubs[2 * k + 1]};
  return MultiGraph::from_pairs(seq.values.size(), pairs);
}

MultiGraph generate_cm(const DegreeSequence& seq, std::uint64_t seed) {
  Rng rng(seed);
  return generate_cm(seq, rng);
}

Erasure erase(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  Erasure out;
  auto& report = out.report;
  report.removed_stubs.assign(n, 0);
  report.y_paper.assign(n, 0);
  std::vector<Edge> kept;
  kept.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) {
      report.z_pair.push_back({e.u, e.v, e.mult});
      report.z_total += e.mult;
      report.removed_stubs[e.u] += 2 * static_cast<std::int64_t>(e.mult);
      report.y_paper[e.u] += e.mult;
      continue;
    }
    kept.push_back(Edge{e.u, e.v, 1});
    if (e.mult > 1) {
      const std::uint64_t z = e.mult - 1;
      report.z_pair.push_back({e.u, e.v, z});
      report.z_total += z;
      report.removed_stubs[e.u] += static_cast<std::int64_t>(z);
      report.removed_stubs[e.v] += static_cast<std::int64_t>(z);
      report.y_paper[e.u] += static_cast<std::int64_t>(z);
      report.y_paper[e.v] += static_cast<std::int64_t>(z);
    }
  }
  out.graph = MultiGraph::from_edges(n, std::move(kept));
  return out;
}

// ---------------------------------------------------------------------------

ConnectionKernel ConnectionKernel::chung_lu() {
  ConnectionKernel k;
  k.kind_ = KernelKind::chung_lu;
  k.name_ = "chung_lu";
  return k;
}

ConnectionKernel ConnectionKernel::poisson() {
  ConnectionKernel k;
  k.kind_ = KernelKind::poisson;
  k.name_ = "poisson";
  return k;
}

ConnectionKernel ConnectionKernel::max_entropy() {
  ConnectionKernel k;
  k.kind_ = KernelKind::max_entropy;
  k.name_ = "max_entropy";
  return k;
}

ConnectionKernel ConnectionKernel::custom(std::string name, std::function<double(double)> q) {
  if (!q) throw InvalidInput("custom kernel needs a q function");
  ConnectionKernel k;
  k.kind_ = KernelKind::custom;
  k.name_ = std::move(name);
  k.custom_ = std::move(q);
  return k;
}

ConnectionKernel ConnectionKernel::from_name(const std::string& name) {
  if (name == "chung_lu") return chung_lu();
  if (name == "poisson") return poisson();
  if (name == "max_entropy") return max_entropy();
  throw InvalidInput("unknown kernel '" + name + "' (expected chung_lu, poisson or max_entropy)");
}

double ConnectionKernel::q(double u) const {
  if (std::isinf(u)) return kind_ == KernelKind::custom ? custom_(u) : 1.0;
  switch (kind_) {
    case KernelKind::chung_lu:
      return std::min(u, 1.0);
    case KernelKind::poisson:
      return -std::expm1(-u);
    case KernelKind::max_entropy:
      return u / (1.0 + u);
    case KernelKind::custom:
      return custom_(u);
  }
  return 0.0;
}

double ConnectionKernel::h(double u) const {
  if (u == 0.0) return 1.0;
  return q(u) / u;
}

std::vector<std::string> kernel_violations(const ConnectionKernel& kernel) {
  std::vector<std::string> out;
  constexpr double tiny = 1e-9;
  if (std::abs(kernel.q(tiny) / tiny - 1.0) > 1e-3) out.emplace_back("(i) h(0) = 1");

  std::vector<double> grid;
  for (double e = -8.0; e <= 8.0 + 1e-12; e += 0.05) grid.push_back(std::pow(10.0, e));
  bool h_monotone = true, q_monotone = true, majorant = true, range = true;
  double prev_h = 1.0, prev_q = 0.0;
  for (double u : grid) {
    const double q = kernel.q(u);
    const double h = kernel.h(u);
    if (!(q >= 0.0 && q <= 1.0)) range = false;
    if (h > prev_h * (1.0 + 1e-12) + 1e-15) h_monotone = false;
    if (q < prev_q * (1.0 - 1e-12) - 1e-15) q_monotone = false;
    if (q > std::min(u, 1.0) * (1.0 + 1e-12)) majorant = false;
    prev_h = h;
    prev_q = q;
  }
  if (!h_monotone) out.emplace_back("(i) h nonincreasing");
  if (kernel.h(1e8) > 1e-3) out.emplace_back("(i) h decreases to 0");
  if (!q_monotone) out.emplace_back("(ii) q nondecreasing");
  if (kernel.q(1e8) < 1.0 - 1e-3) out.emplace_back("(ii) q increases to 1");
  if (!majorant) out.emplace_back("q(u) <= min(u,1)");
  if (!range) out.emplace_back("q(u) in [0,1]");
  return out;
}

void validate_kernel(const ConnectionKernel& kernel) {
  const auto violations = kernel_violations(kernel);
  if (violations.empty()) return;
  std::string msg = "kernel '" + kernel.name() + "' violates:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw ValidationError(msg);
}

double connection_probability(const ConnectionKernel& kernel, double w_i, double w_j, double mu, double n) {
  const double u = w_i * w_j / (mu * n);
  return std::clamp(kernel.q(u), 0.0, 1.0);
}

MultiGraph generate_irg(const DegreeSequence& weights, const ConnectionKernel& kernel, Rng& rng,
                        std::optional<double> mu) {
  validate_kernel(kernel);
  const std::size_t n = weights.values.size();
  if (n == 0) return MultiGraph::from_edges(0, {});
  const double mean =
      mu.value_or(static_cast<double>(std::accumulate(weights.values.begin(), weights.values.end(), Degree{0})) /
                  static_cast<double>(n));
  if (!(mean > 0.0)) throw InvalidInput("inhomogeneous random graph: mu must be positive");

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return weights.values[a] > weights.values[b]; });
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = static_cast<double>(weights.values[order[k]]);

  const double norm = mean * static_cast<double>(n);
  auto prob = [&](std::size_t a, std::size_t b) { return std::clamp(kernel.q(w[a] * w[b] / norm), 0.0, 1.0); };

  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t j = i + 1;
    double bound = prob(i, j);
    while (j < n && bound > 0.0) {
      if (bound >= 1.0) {
        // `bound` may be stale (taken at j-1); re-evaluate before forcing an edge.
        const double p = prob(i, j);
        if (p >= 1.0) {
          pairs.emplace_back(order[i], order[j]);
          ++j;
          continue;
        }
        bound = p;
        if (bound <= 0.0) break;
      }
      // Number of pairs skipped before the next candidate, Geometric(bound).
      const double skip = std::floor(std::log(rng.uniform_open()) / std::log1p(-bound));
      if (skip >= static_cast<double>(n - j)) break;
      j += static_cast<std::size_t>(skip);
      const double p = prob(i, j);
      if (rng.uniform() * bound < p) pairs.emplace_back(order[i], order[j]);
      bound = p;
      ++j;
    }
  }
  return MultiGraph::from_pairs(n, pairs);
}

MultiGraph generate_irg(const DegreeSequence& weights, const ConnectionKernel& kernel, std::uint64_t seed,
                        std::optional<double> mu) {
  Rng rng(seed);
  return generate_irg(weights, kernel, rng, mu);
}

}  // namespace nullmodels
