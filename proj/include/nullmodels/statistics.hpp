#pragma once

#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nullmodels/degree_model.hpp"
#include "nullmodels/multigraph.hpp"

namespace nullmodels {

using BigInt = boost::multiprecision::cpp_int;

BigInt to_big(unsigned __int128 v);
double to_double(const BigInt& v);

// Pearson degree-degree correlation of a multigraph, r = r_plus - r_minus.
//   E  = sum_{i,j} X_ij D_i D_j  (ordered pairs, each loop weighted 2)
//   r+ = L E / (L s3 - s2^2),  r- = s2^2 / (L s3 - s2^2)
// All sums are exact integers; only the final ratios are rounded.
struct PearsonBreakdown {
  double r = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
  BigInt numerator_edge_sum;
  BigInt s2;
  BigInt s3;
  std::int64_t l = 0;
};

// Throws DegenerateStatistic when L s3 == s2^2 (all nonzero degrees equal).
PearsonBreakdown pearson(const MultiGraph& g);
PearsonBreakdown pearson_from_sums(BigInt edge_sum, BigInt s2, BigInt s3, std::int64_t l);

// sum_{i<j<k} X_ij X_jk X_ik; loops never contribute.
double triangle_count(const MultiGraph& g);
// Number of triangles through each vertex (multiplicity weighted).
std::vector<double> local_triangles(const MultiGraph& g);

struct ClusteringResult {
  double triangles = 0.0;
  double wedge_sum = 0.0;  // sum_i D_i (D_i - 1)
  double c_global = 0.0;   // 6 triangles / wedge_sum, not clamped
};

// Throws DegenerateStatistic if the wedge sum is zero.
ClusteringResult clustering_global(const MultiGraph& g);

// Mean local clustering over vertices of degree >= 2. Simple graphs only.
double clustering_average(const MultiGraph& g);

// Exact sum_i D_i^p for p in {1,2,3,4,6}; 128-bit accumulation with a
// big-integer fallback when it would overflow.
std::map<int, BigInt> degree_power_sums(std::span<const Degree> degrees, std::span<const int> powers);
BigInt degree_power_sum(std::span<const Degree> degrees, int power);

}  // namespace nullmodels
