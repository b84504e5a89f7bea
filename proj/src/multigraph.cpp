#include "nullmodels/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "nullmodels/error.hpp"
#include "radix_sort.hpp"

namespace nullmodels {

namespace {

constexpr std::uint64_t pair_key(Vertex a, Vertex b) {
  const Vertex lo = a < b ? a : b;
  const Vertex hi = a < b ? b : a;
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

MultiGraph MultiGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
  if (n > std::numeric_limits<Vertex>::max()) throw InvalidInput("graph too large for 32-bit vertex ids");
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInput("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  MultiGraph g;
  g.degrees_.assign(n, 0);
  g.loops_.assign(n, 0);
  for (const Edge& e : edges) {
    if (e.mult == 0) continue;
    if (!g.edges_.empty() && g.edges_.back().u == e.u && g.edges_.back().v == e.v) {
      g.edges_.back().mult += e.mult;
    } else {
      g.edges_.push_back(e);
    }
  }

  // CSR over both directions, loops excluded.
  std::vector<std::uint64_t> row(n + 1, 0);
  for (const Edge& e : g.edges_) {
    g.edge_count_ += e.mult;
    if (e.u == e.v) {
      g.loops_[e.u] = e.mult;
      g.degrees_[e.u] += 2 * static_cast<Degree>(e.mult);
    } else {
      g.degrees_[e.u] += e.mult;
      g.degrees_[e.v] += e.mult;
      ++row[e.u + 1];
      ++row[e.v + 1];
    }
  }
  for (std::size_t i = 0; i < n; ++i) row[i + 1] += row[i];
  g.offsets_ = row;
  g.adjacency_.resize(row[n]);
  g.adjacency_mult_.resize(row[n]);
  // Edges are sorted by (u, v), so filling in this order keeps each row sorted:
  // row u receives its larger neighbours in order, and row v receives u's in
  // increasing u.
  std::vector<std::uint64_t> cursor(row.begin(), row.end() - 1);
  for (const Edge& e : g.edges_) {
    if (e.u == e.v) continue;
    g.adjacency_[cursor[e.v]] = e.u;
    g.adjacency_mult_[cursor[e.v]++] = e.mult;
  }
  for (const Edge& e : g.edges_) {
    if (e.u == e.v) continue;
    g.adjacency_[cursor[e.u]] = e.v;
    g.adjacency_mult_[cursor[e.u]++] = e.mult;
  }
  return g;
}

MultiGraph MultiGraph::from_pairs(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs) {
  std::vector<std::uint64_t> keys;
  keys.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) throw InvalidInput("edge endpoint out of range");
    keys.push_back(pair_key(a, b));
  }
  detail::radix_sort(keys);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    edges.push_back(Edge{static_cast<Vertex>(keys[i] >> 32), static_cast<Vertex>(keys[i] & 0xffffffffu),
                         static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return from_edges(n, std::move(edges));
}

std::uint64_t MultiGraph::multiplicity(Vertex i, Vertex j) const {
  if (i == j) return loops_[i];
  const Vertex a = offsets_[i + 1] - offsets_[i] <= offsets_[j + 1] - offsets_[j] ? i : j;
  const Vertex b = a == i ? j : i;
  const auto row = neighbours(a);
  const auto it = std::lower_bound(row.begin(), row.end(), b);
  if (it == row.end() || *it != b) return 0;
  return neighbour_multiplicities(a)[static_cast<std::size_t>(it - row.begin())];
}

bool MultiGraph::is_simple() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.u != e.v && e.mult == 1; });
}

std::vector<Degree> MultiGraph::recompute_degrees() const {
  std::vector<Degree> d(vertex_count(), 0);
  for (const Edge& e : edges_) {
    if (e.u == e.v) {
      d[e.u] += 2 * static_cast<Degree>(e.mult);
    } else {
      d[e.u] += e.mult;
      d[e.v] += e.mult;
    }
  }
  return d;
}

void write_edge_list(std::ostream& out, const MultiGraph& g, const std::map<std::string, std::string>& header) {
  out << "#n " << g.vertex_count() << '\n';
  for (const auto& [key, value] : header) {
    if (key == "n") continue;
    out << '#' << key << ' ' << value << '\n';
  }
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.mult << '\n';
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool next_uint(std::string_view& s, std::uint64_t& value) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || (ptr != s.data() + s.size() && !std::isspace(static_cast<unsigned char>(*ptr))))
    return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

}  // namespace

EdgeListFile read_edge_list(std::istream& in) {
  EdgeListFile file;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      view.remove_prefix(1);
      const auto space = view.find_first_of(" \t");
      const std::string key(view.substr(0, space));
      const std::string value(space == std::string_view::npos ? std::string_view{} : trim(view.substr(space)));
      if (key == "n") {
        std::string_view v = value;
        if (!next_uint(v, n) || !trim(v).empty()) throw ParseError(lineno, "malformed '#n' header");
        have_n = true;
      }
      file.header[key] = value;
      continue;
    }
    if (!have_n) throw ParseError(lineno, "edge line before '#n <count>' header");
    std::uint64_t u = 0, v = 0, k = 0;
    if (!next_uint(view, u) || !next_uint(view, v) || !next_uint(view, k) || !trim(view).empty())
      throw ParseError(lineno, "expected 'i j multiplicity'");
    if (u >= n || v >= n) throw ParseError(lineno, "vertex id out of range");
    if (k == 0 || k > std::numeric_limits<std::uint32_t>::max()) throw ParseError(lineno, "multiplicity out of range");
    edges.push_back(Edge{static_cast<Vertex>(u), static_cast<Vertex>(v), static_cast<std::uint32_t>(k)});
  }
  if (!have_n) throw ParseError(lineno, "missing '#n <count>' header");
  file.graph = MultiGraph::from_edges(n, std::move(edges));
  return file;
}

}  // namespace nullmodels
