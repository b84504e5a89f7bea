#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nullmodels/rng.hpp"

namespace nullmodels {

using Degree = std::int64_t;

// Integer degree law with an exact pure-Pareto tail:
//   P(D > t) = min(1, scale * t^{-gamma})   for integer t >= 1,
// so the slowly varying part of the tail is the constant `scale`.
struct DegreeLaw {
  double gamma = 1.5;
  double scale = 1.0;

  // Throws InvalidInput unless 1 < gamma < 2 and scale > 0.
  void validate() const;

  // P(D > t) for real t >= 0.
  double survival(double t) const;
  // P(D = x) for integer x >= 1.
  double pmf(Degree x) const;
  // E[D] = sum_{t>=0} P(D > t), evaluated with a truncated zeta series plus
  // Euler-Maclaurin tail (absolute accuracy better than 1e-8).
  double mean() const;
};

struct DegreeSequence {
  std::vector<Degree> values;
  std::int64_t total = 0;
  // True when 1 was added to the last entry to make `total` even.
  bool parity_adjusted = false;

  std::size_t size() const noexcept { return values.size(); }
  // The sequence before the parity fix.
  std::vector<Degree> unadjusted() const;
};

// D = ceil((scale/u)^{1/gamma}), at least 1. Throws InvalidInput when u is
// not in (0, 1).
Degree sample_degree(const DegreeLaw& law, double u);

// n i.i.d. draws from `law`. When the sum is odd the last entry is
// incremented and `parity_adjusted` is set.
DegreeSequence sample_sequence(const DegreeLaw& law, std::size_t n, Rng& rng);
DegreeSequence sample_sequence(const DegreeLaw& law, std::size_t n, std::uint64_t seed);

// Builds a sequence from explicit values without a parity fix.
DegreeSequence make_sequence(std::vector<Degree> values);

// E[D * min(1, D/t)] by direct summation up to t and an analytic tail.
double law_moment_tail(const DegreeLaw& law, double t);

// Newline-delimited integers.
void write_sequence(std::ostream& out, std::span<const Degree> values);
std::vector<Degree> read_sequence(std::istream& in);

}  // namespace nullmodels
