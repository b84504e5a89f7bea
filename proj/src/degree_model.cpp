#include "nullmodels/degree_model.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "nullmodels/error.hpp"
#include "nullmodels/special.hpp"

namespace nullmodels {

void DegreeLaw::validate() const {
  if (!(gamma > 1.0 && gamma < 2.0))
    throw InvalidInput("degree law: gamma must lie in (1,2), got " + std::to_string(gamma));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidInput("degree law: scale must be positive");
}

double DegreeLaw::survival(double t) const {
  if (t < 1.0) return 1.0;
  const double k = std::floor(t);
  return std::min(1.0, scale * std::pow(k, -gamma));
}

double DegreeLaw::pmf(Degree x) const {
  if (x < 1) return 0.0;
  const double below = x == 1 ? 1.0 : survival(static_cast<double>(x - 1));
  return below - survival(static_cast<double>(x));
}

namespace {

// First integer k >= 1 with scale * k^{-gamma} < 1.
long first_tail_index(const DegreeLaw& law) {
  long k = std::max(1L, static_cast<long>(std::floor(std::pow(law.scale, 1.0 / law.gamma))));
  while (law.scale * std::pow(static_cast<double>(k), -law.gamma) >= 1.0) ++k;
  return k;
}

// sum_{k >= from} P(D > k), from >= 1.
double survival_tail_sum(const DegreeLaw& law, long from, long terms) {
  const long k0 = first_tail_index(law);
  double head = 0.0;
  for (long k = from; k < k0; ++k) head += 1.0;
  const long start = std::max(from, k0);
  return head + law.scale * special::hurwitz_zeta(law.gamma, static_cast<double>(start), terms);
}

}  // namespace

double DegreeLaw::mean() const {
  validate();
  // P(D > 0) = 1, then the sum over t >= 1.
  return 1.0 + survival_tail_sum(*this, 1, 1'000'000);
}

std::vector<Degree> DegreeSequence::unadjusted() const {
  std::vector<Degree> out = values;
  if (parity_adjusted && !out.empty()) out.back() -= 1;
  return out;
}

Degree sample_degree(const DegreeLaw& law, double u) {
  law.validate();
  if (!(u > 0.0 && u < 1.0)) throw InvalidInput("sample_degree: u must lie in (0,1)");
  const double x = std::pow(law.scale / u, 1.0 / law.gamma);
  if (!(x < 9.0e18)) throw InvalidInput("sample_degree: degree overflows 64-bit range");
  double k = std::ceil(x);
  // pow() may land one ulp above an exact integer; snap back.
  if (k - 1.0 >= 1.0 && x - (k - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() * x) k -= 1.0;
  return std::max<Degree>(1, static_cast<Degree>(k));
}

DegreeSequence sample_sequence(const DegreeLaw& law, std::size_t n, Rng& rng) {
  law.validate();
  if (n == 0) throw InvalidInput("sample_sequence: n must be at least 1");
  DegreeSequence seq;
  seq.values.resize(n);
  for (auto& d : seq.values) {
    d = sample_degree(law, rng.uniform_open());
    seq.total += d;
  }
  if (seq.total % 2 != 0) {
    seq.values.back() += 1;
    seq.total += 1;
    seq.parity_adjusted = true;
  }
  return seq;
}

DegreeSequence sample_sequence(const DegreeLaw& law, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_sequence(law, n, rng);
}

DegreeSequence make_sequence(std::vector<Degree> values) {
  DegreeSequence seq;
  for (Degree d : values) {
    if (d < 0) throw InvalidInput("degree sequence: negative entry");
    seq.total += d;
  }
  seq.values = std::move(values);
  return seq;
}

double law_moment_tail(const DegreeLaw& law, double t) {
  law.validate();
  if (!(t > 0.0)) throw InvalidInput("law_moment_tail: t must be positive");
  if (t <= 1.0) return law.mean();
  const auto m = static_cast<long>(std::floor(t));
  // Degrees x <= m contribute x^2/t; degrees above m contribute x.
  double low = 0.0;
  for (long x = m; x >= 1; --x) {
    const double xd = static_cast<double>(x);
    low += law.pmf(x) * xd * xd;
  }
  low /= t;
  // E[D; D > m] = (m+1) P(D > m) + sum_{k > m} P(D > k).
  const double high = static_cast<double>(m + 1) * law.survival(static_cast<double>(m)) +
                      survival_tail_sum(law, m + 1, 2000);
  return low + high;
}

void write_sequence(std::ostream& out, std::span<const Degree> values) {
  for (Degree d : values) out << d << '\n';
}

std::vector<Degree> read_sequence(std::istream& in) {
  std::vector<Degree> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(line, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected an integer degree");
    }
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos != line.size() || v < 0) throw ParseError(lineno, "expected a non-negative integer degree");
    out.push_back(v);
  }
  return out;
}

}  // namespace nullmodels
