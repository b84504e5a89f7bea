#include "nullmodels/statistics.hpp"

#include <algorithm>
#include <numeric>

#include "nullmodels/error.hpp"

namespace nullmodels {

using u128 = unsigned __int128;

BigInt to_big(u128 v) {
  BigInt out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

namespace {

long double to_ld(const BigInt& v) { return v.convert_to<long double>(); }

}  // namespace

PearsonBreakdown pearson_from_sums(BigInt edge_sum, BigInt s2, BigInt s3, std::int64_t l) {
  const BigInt sq = s2 * s2;
  const BigInt den = BigInt(l) * s3 - sq;
  if (den == 0) throw DegenerateStatistic("pearson: degenerate denominator (all degrees equal)");
  const BigInt plus = BigInt(l) * edge_sum;
  const long double d = to_ld(den);
  PearsonBreakdown out;
  out.r = static_cast<double>(to_ld(plus - sq) / d);
  out.r_plus = static_cast<double>(to_ld(plus) / d);
  out.r_minus = static_cast<double>(to_ld(sq) / d);
  out.numerator_edge_sum = std::move(edge_sum);
  out.s2 = std::move(s2);
  out.s3 = std::move(s3);
  out.l = l;
  return out;
}

PearsonBreakdown pearson(const MultiGraph& g) {
  const auto deg = g.degrees();
  u128 edge_sum = 0;
  for (const Edge& e : g.edges()) {
    const u128 term = static_cast<u128>(e.mult) * static_cast<u128>(deg[e.u]) * static_cast<u128>(deg[e.v]);
    // Ordered double sum: X_ij and X_ji for i != j, and a loop counted twice.
    edge_sum += 2 * term;
  }
  u128 s2 = 0, s3 = 0;
  std::int64_t l = 0;
  for (Degree d : deg) {
    const u128 dd = static_cast<u128>(d);
    s2 += dd * dd;
    s3 += dd * dd * dd;
    l += d;
  }
  return pearson_from_sums(to_big(edge_sum), to_big(s2), to_big(s3), l);
}

namespace {

// Degree-ordered orientation: each edge points from lower to higher
// (adjacency size, id) rank. Every triangle is found once, from its
// lowest-ranked vertex.
struct Oriented {
  std::vector<std::uint64_t> offsets;
  std::vector<Vertex> target;
  std::vector<std::uint32_t> mult;
};

Oriented orient(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  auto before = [&](Vertex a, Vertex b) {
    const auto da = g.neighbours(a).size(), db = g.neighbours(b).size();
    return da != db ? da < db : a < b;
  };
  Oriented o;
  o.offsets.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : g.neighbours(v))
      if (before(v, w)) ++o.offsets[v + 1];
  for (std::size_t i = 0; i < n; ++i) o.offsets[i + 1] += o.offsets[i];
  o.target.resize(o.offsets[n]);
  o.mult.resize(o.offsets[n]);
  for (Vertex v = 0; v < n; ++v) {
    auto pos = o.offsets[v];
    const auto nb = g.neighbours(v);
    const auto nm = g.neighbour_multiplicities(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (before(v, nb[k])) {
        o.target[pos] = nb[k];
        o.mult[pos++] = nm[k];
      }
    }
  }
  return o;
}

template <typename Visit>
void for_each_triangle(const MultiGraph& g, Visit&& visit) {
  const std::size_t n = g.vertex_count();
  const Oriented o = orient(g);
  std::vector<std::uint32_t> mark(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    const auto begin = o.offsets[u], end = o.offsets[u + 1];
    if (end - begin < 2) continue;
    for (auto k = begin; k < end; ++k) mark[o.target[k]] = o.mult[k];
    for (auto k = begin; k < end; ++k) {
      const Vertex v = o.target[k];
      const std::uint64_t x_uv = o.mult[k];
      for (auto m = o.offsets[v]; m < o.offsets[v + 1]; ++m) {
        const Vertex w = o.target[m];
        if (const std::uint32_t x_uw = mark[w]) visit(u, v, w, static_cast<u128>(x_uv) * o.mult[m] * x_uw);
      }
    }
    for (auto k = begin; k < end; ++k) mark[o.target[k]] = 0;
  }
}

}  // namespace

double triangle_count(const MultiGraph& g) {
  u128 total = 0;
  for_each_triangle(g, [&](Vertex, Vertex, Vertex, u128 weight) { total += weight; });
  return to_double(to_big(total));
}

std::vector<double> local_triangles(const MultiGraph& g) {
  std::vector<double> t(g.vertex_count(), 0.0);
  for_each_triangle(g, [&](Vertex u, Vertex v, Vertex w, u128 weight) {
    const auto x = static_cast<double>(weight);
    t[u] += x;
    t[v] += x;
    t[w] += x;
  });
  return t;
}

ClusteringResult clustering_global(const MultiGraph& g) {
  u128 wedges = 0;
  for (Degree d : g.degrees())
    if (d > 1) wedges += static_cast<u128>(d) * static_cast<u128>(d - 1);
  if (wedges == 0) throw DegenerateStatistic("clustering: no connected triples (wedge sum is zero)");
  ClusteringResult out;
  out.triangles = triangle_count(g);
  out.wedge_sum = to_double(to_big(wedges));
  out.c_global = 6.0 * out.triangles / out.wedge_sum;
  return out;
}

double clustering_average(const MultiGraph& g) {
  if (!g.is_simple()) throw InvalidInput("clustering_average: graph must be simple");
  const auto t = local_triangles(g);
  double sum = 0.0;
  std::size_t count = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto d = static_cast<double>(g.degree(v));
    if (d < 2.0) continue;
    sum += t[v] / (d * (d - 1.0) / 2.0);
    ++count;
  }
  if (count == 0) throw DegenerateStatistic("clustering_average: no vertex of degree >= 2");
  return sum / static_cast<double>(count);
}

BigInt degree_power_sum(std::span<const Degree> degrees, int power) {
  if (power != 1 && power != 2 && power != 3 && power != 4 && power != 6)
    throw InvalidInput("degree_power_sums: power must be one of 1,2,3,4,6");
  u128 fast = 0;
  std::size_t i = 0;
  for (; i < degrees.size(); ++i) {
    if (degrees[i] < 0) throw InvalidInput("degree_power_sums: negative degree");
    u128 term = 1;
    bool overflow = false;
    for (int p = 0; p < power && !overflow; ++p)
      overflow = __builtin_mul_overflow(term, static_cast<u128>(degrees[i]), &term);
    u128 next = 0;
    if (overflow || __builtin_add_overflow(fast, term, &next)) break;
    fast = next;
  }
  if (i == degrees.size()) return to_big(fast);
  BigInt slow = to_big(fast);
  for (; i < degrees.size(); ++i) slow += boost::multiprecision::pow(BigInt(degrees[i]), static_cast<unsigned>(power));
  return slow;
}

std::map<int, BigInt> degree_power_sums(std::span<const Degree> degrees, std::span<const int> powers) {
  std::map<int, BigInt> out;
  for (int p : powers) out.emplace(p, degree_power_sum(degrees, p));
  return out;
}

}  // namespace nullmodels
