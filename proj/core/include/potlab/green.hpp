#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "potlab/builders.hpp"
#include "potlab/graph.hpp"
#include "potlab/walk.hpp"

namespace potlab {

struct SolverOptions {
  /// Stop when max_x |f(x) - ((I - P^U) v)(x)| <= tolerance * max|f|.
  double tolerance = 1e-12;
  /// 0 selects 20 |U| + 1000.
  std::size_t max_iterations = 0;
};

struct SolveInfo {
  std::size_t iterations = 0;
  double defect = 0.0;
};

/// g^U(., x0) zero-extended to the host.
struct GreenColumn {
  VertexSet domain;
  VertexId pole = 0;
  FunctionTable values;
  SolveInfo info;
};

/// (G^U f)(x) = sum_{y in U} g^U(x, y) f(y) mu(y), computed as the solution
/// of (I_U - P^U) v = f on U. Throws SingularSystem when U is the whole host.
FunctionTable green_operator_apply(const WeightedGraph& g, const VertexSet& U,
                                   std::span<const double> f, const SolverOptions& options = {},
                                   SolveInfo* info = nullptr);

/// Solves (I_U - P^U) v = delta_{x0} / mu(x0). Throws PoleOutsideDomain.
GreenColumn local_green(const WeightedGraph& g, const VertexSet& U, VertexId x0,
                        const SolverOptions& options = {});

/// G^U f by the Neumann series sum_n (P^U)^n f. With s_N = (P^U)^N 1 and
/// ||s_N|| < 1 the remaining tail is at most N ||s_N|| / (1 - ||s_N||) ||f||;
/// summation stops once that bound is below `tail_tolerance`.
struct SeriesGreen {
  FunctionTable values;
  std::size_t terms = 0;
  double tail_bound = 0.0;
  bool certified = false;
};
SeriesGreen killed_series_green(const WeightedGraph& g, const VertexSet& U,
                                std::span<const double> f, double tail_tolerance = 1e-12,
                                std::size_t max_terms = 1'000'000);

/// g^{U_i}(x0, y0) along an exhaustion.
struct ExhaustionGreen {
  std::vector<std::uint32_t> radii;
  std::vector<double> values;
  std::vector<double> increments;
  /// every value >= previous - 1e-12
  bool monotone = true;
  /// a + b / r fitted to the last (up to four) values; absent with fewer
  /// than three radii.
  std::optional<double> extrapolated;
};
ExhaustionGreen exhaustion_green(const TruncatedGraph& t, const Exhaustion& ex, VertexId x0,
                                 VertexId y0, const SolverOptions& options = {});

/// sum_{z in U} g^U(x0, z) g^U(z, x0)^{q-1} mu(z), the local surrogate of g_q.
double lq_green(const WeightedGraph& g, const VertexSet& U, VertexId x0, double q,
                const SolverOptions& options = {});
double lq_green(const GreenColumn& column, const WeightedGraph& g, double q);

/// sum_{n=d}^{N} n / V(x, n).
struct LiYauSeries {
  VertexId base = 0;
  std::uint64_t distance = 0;
  std::uint64_t horizon = 0;
  double value = 0.0;
  /// Fitted growth exponent of V on the upper half of [1, N]; the tail past
  /// N is finite when it exceeds 2.
  double growth_exponent = 0.0;
  bool tail_bounded = false;
};
LiYauSeries li_yau_series(const BallProfile& profile, std::uint64_t d, std::uint64_t N);

struct GreenBandEntry {
  VertexId x = 0;
  VertexId y = 0;
  std::uint32_t distance = 0;
  double green = 0.0;
  double series = 0.0;
  double ratio = 0.0;
};

struct GreenBandReport {
  std::vector<GreenBandEntry> entries;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double width = 0.0;
  double band_limit = 0.0;
  bool pass = false;
};

/// Ratio of the largest exhaustion value g^{U_k}(x, y) to
/// li_yau_series(profile, d(x, y), N) for each pair. `profile` stands for
/// V(x, .) at every x, so the host should be vertex-transitive (lattices,
/// Cayley graphs and their hat graphs).
GreenBandReport green_band_check(const TruncatedGraph& t, const Exhaustion& ex,
                                 const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                 const BallProfile& profile, std::uint64_t N,
                                 double band_limit = 100.0, const SolverOptions& options = {});

}  // namespace potlab
