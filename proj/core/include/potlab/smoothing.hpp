#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "potlab/builders.hpp"
#include "potlab/graph.hpp"

namespace potlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// mu^_xy = mu_xy / 2 + (1/2) sum_z mu_xz mu_zy / mu(z). Every vertex gets a
/// loop and mu^(x) = mu(x).
WeightedGraph hat_graph(const WeightedGraph& g);

/// Hat graph of a truncated host. Vertices with d^(o, x) < floor(R / 2) have
/// exact hat weights; the profile is V^(o, n) = V(o, 2n).
TruncatedGraph hat_truncated(const TruncatedGraph& t);

/// c_k = sum_{m + n = k, 0 <= m <= n} 2^{-n} C(n, m) for k <= 2 kmax + 1;
/// a_k = 2^{2k} c_{2k}, a_bar_k = 2^{2k+1} c_{2k+1} for k <= kmax;
/// b_k = a_k - a_{k-1}, b_bar_k = a_bar_k - a_bar_{k-1} for 2 <= k <= kmax
/// (entries 0 and 1 of b and b_bar are left at zero).
struct SmoothingCoefficients {
  std::size_t kmax = 0;
  std::vector<Rational> c;
  std::vector<Rational> a;
  std::vector<Rational> a_bar;
  std::vector<Rational> b;
  std::vector<Rational> b_bar;
};

SmoothingCoefficients coefficients(std::size_t kmax);

/// Exact comparison of the coefficient sequences against their closed forms:
/// b_k = 2^{2k-1}, b_bar_k = 2^{2k}, a_k = 3 + sum_{m=2}^k 2^{2m-1},
/// a_bar_k = 5 + sum_{m=2}^k 2^{2m}, a_k = sum_m 2^m C(2k-m, m),
/// a_bar_k = sum_m 2^m C(2k+1-m, m), and 1/2 <= c_k <= 1.
/// Returns a description of each failed identity (empty when all hold).
std::vector<std::string> coefficient_identity_failures(const SmoothingCoefficients& coeffs);

enum class Arithmetic { Floating, Exact };

/// max_{x,y,n <= nmax} |P^_n(x, y) - 2^{-n} sum_m C(n, m) P_{n+m}(x, y)| using
/// dense powers. Exact mode converts the (binary floating) weights to
/// rationals and returns 0 exactly when the identity holds.
double binomial_identity_check(const WeightedGraph& g, std::size_t nmax,
                               Arithmetic arithmetic = Arithmetic::Floating);

struct SandwichReport {
  std::size_t l = 0;
  /// min over entries of middle - lower and upper - middle, for the c_n form
  /// sum_{n<=l} c_n P_n <= sum_{n<=l} P^_n <= sum_{n<=2l} c_n P_n
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  /// same for (1/2) sum_{n<=l} P_n <= sum_{n<=l} P^_n <= sum_{n<=2l} P_n
  double coarse_lower_margin = 0.0;
  double coarse_upper_margin = 0.0;
  bool pass = false;
};

/// Entrywise sandwich of hat partial sums; floating mode allows -1e-12.
SandwichReport sandwich_check(const WeightedGraph& g, std::size_t l,
                              Arithmetic arithmetic = Arithmetic::Floating);

struct StructureReport {
  double vertex_weight_defect = 0.0;  // max |mu^(x) - mu(x)| / mu(x)
  /// vertices where mu^(x) != mu(x) when the hat weights of g are summed
  /// in rational arithmetic
  std::size_t exact_weight_mismatches = 0;
  bool loops_everywhere = false;
  double alpha = 0.0;                 // (P0) constant of g
  double hat_alpha = 0.0;             // (P0) constant of the hat graph
  double min_loop_ratio = 0.0;        // min mu^_xx / mu^(x)
  double min_old_edge_ratio = 0.0;    // min P^(x, y) over edges of g
  bool delta_condition = false;       // hat_alpha, loops >= alpha^2/2 and old edges >= alpha/2
  std::size_t balls_checked = 0;
  std::size_t ball_mismatches = 0;    // B^(x, n) != B(x, 2n)
  std::size_t pairs_checked = 0;
  std::size_t distance_violations = 0;  // not d^ <= d <= 2 d^
  bool pass = false;
};

/// Checks the hat graph against g: weights, loops and (Delta) constants,
/// balls B^(x, n) = B(x, 2n) for `samples` vertices and n <= nmax, and
/// distance comparison on `samples` pairs. Sampling is seeded.
StructureReport structure_report(const WeightedGraph& g, std::size_t samples = 20,
                                 std::uint32_t nmax = 5, std::uint64_t seed = 7);

struct GreenComparisonEntry {
  VertexId x = 0;
  VertexId y = 0;
  double half_lower = 0.0;  // (1/2) sum_{n<=l} p_n(x, y)
  double hat_sum = 0.0;     // sum_{n<=l} p^_n(x, y)
  double upper = 0.0;       // sum_{n<=2l} p_n(x, y)
  bool holds = false;
};

struct GreenComparisonReport {
  std::size_t l = 0;
  std::vector<GreenComparisonEntry> entries;
  bool pass = false;
};

/// Partial-sum form of g/2 <= g^ <= g on a truncated host, from heat kernels
/// of the host and its hat graph. Relative slack 1e-12.
GreenComparisonReport green_comparison_check(const TruncatedGraph& t, std::size_t l,
                                             const std::vector<std::pair<VertexId, VertexId>>& pairs);

}  // namespace potlab
