#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nullmodels/degree_model.hpp"

namespace nullmodels {

using Vertex = std::uint32_t;

// One entry of the multiplicity map X_ij, u <= v. u == v is a vertex with
// `mult` self-loops; each loop adds 2 to the degree.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  std::uint32_t mult = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected multigraph on vertices 0..n-1, immutable after construction.
//
// The multiplicity map is stored as a sorted edge list plus a CSR adjacency
// (loops excluded) with multiplicities, so X_ij lookups are a binary search
// over the shorter adjacency row and triangle counting can intersect sorted
// rows.
class MultiGraph {
 public:
  MultiGraph() = default;

  // Merges repeated (u,v) entries by summing multiplicities; order of the
  // endpoints does not matter. Entries with mult == 0 are dropped.
  static MultiGraph from_edges(std::size_t n, std::vector<Edge> edges);
  // One unit of multiplicity per (u,v) entry of `pairs`.
  static MultiGraph from_pairs(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs);

  std::size_t vertex_count() const noexcept { return degrees_.size(); }
  // Sorted by (u, v), u <= v, mult >= 1.
  std::span<const Edge> edges() const noexcept { return edges_; }
  // D_i = 2 X_ii + sum_{j != i} X_ij.
  std::span<const Degree> degrees() const noexcept { return degrees_; }
  Degree degree(Vertex v) const { return degrees_[v]; }

  std::uint64_t multiplicity(Vertex i, Vertex j) const;
  std::uint32_t loops(Vertex v) const { return loops_[v]; }

  // Neighbours j != v in increasing order, with X_vj.
  std::span<const Vertex> neighbours(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::span<const std::uint32_t> neighbour_multiplicities(Vertex v) const {
    return {adjacency_mult_.data() + offsets_[v], adjacency_mult_.data() + offsets_[v + 1]};
  }

  // Total number of edges, loops included, counted with multiplicity.
  std::uint64_t edge_count() const noexcept { return edge_count_; }
  bool is_simple() const noexcept;

  // Recomputes degrees from the multiplicity map; used by invariant checks.
  std::vector<Degree> recompute_degrees() const;

 private:
  std::vector<Edge> edges_;
  std::vector<Degree> degrees_;
  std::vector<std::uint32_t> loops_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<std::uint32_t> adjacency_mult_;
  std::uint64_t edge_count_ = 0;
};

// Text edge list: header "#n <count>", optional "#key value" lines, then
// "i j multiplicity" per line with 0-based ids; loops as "i i k".
void write_edge_list(std::ostream& out, const MultiGraph& g,
                     const std::map<std::string, std::string>& header = {});

struct EdgeListFile {
  MultiGraph graph;
  std::map<std::string, std::string> header;
};

// Throws ParseError carrying the offending line number.
EdgeListFile read_edge_list(std::istream& in);

}  // namespace nullmodels
