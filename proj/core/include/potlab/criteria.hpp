#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "potlab/builders.hpp"
#include "potlab/graph.hpp"
#include "potlab/series.hpp"
#include "potlab/walk.hpp"

namespace potlab {

/// sum_{n>=1} n / mu(B(o, n)) up to N.
SeriesVerdict nash_williams(const BallProfile& profile, std::uint64_t N);

/// sum_{n>=0} (sum_{m>=n} m / V(o, m))^q mu(S(o, n)) up to N, q = p / (p - 1).
///
/// The inner tails past N come from V(o, m) ~ V(o, N) (m / N)^gamma with
/// gamma fitted on [N/2, N]; tail_extended is set. When gamma <= 2 the inner
/// series diverges and the verdict is InnerDivergent.
SeriesVerdict lp_parabolic_series(const BallProfile& profile, double p, std::uint64_t N);

/// sum_{n>=0} n (sum_{m>=n} m / V(o, m))^{1/(p-1)} up to N, inner tails as above.
SeriesVerdict lp_sufficient_series(const BallProfile& profile, double p, std::uint64_t N);

struct VolumeTest {
  double p = 0.0;
  std::uint64_t rmin = 0;
  std::uint64_t rmax = 0;
  /// slope of log(V / (r^{2p} (log r)^{p-1})) against log r on [rmin, rmax]
  double slope = 0.0;
  double fit_residual = 0.0;
  /// max of V / (r^{2p} (log r)^{p-1}) over [rmin, rmax]
  double constant = 0.0;
  double slope_limit = 0.05;
  bool pass = false;
};

/// Bound V(o, r) <= C r^{2p} (log r)^{p-1} judged over the upper half of the
/// profile: passes when the normalized volume does not grow (slope <= 0.05).
VolumeTest corollary_volume_test(const BallProfile& profile, double p);

/// Partial sums S(h) = sum_{n=0}^{h} (sum_{m=n}^{h} p_m(o, o))^{q-1} at
/// doubling horizons h <= H, where `diagonal` holds p_m(o, o) for m <= H.
/// For q >= 2 each S(h) is a lower bound for the q-Green value at o; for
/// q < 2 the sums are still reported but bound nothing. Throws
/// HorizonTooShort when H < 100.
SeriesVerdict diagonal_lower_series(std::span<const double> diagonal, double q);
SeriesVerdict diagonal_lower_series(const HeatKernelSeries& hk, double q);

enum class SystemStatus { Harmonic, SuperharmonicPair, Violation };
std::string to_string(SystemStatus status);

struct SystemReport {
  SystemStatus status = SystemStatus::Harmonic;
  std::size_t checked = 0;
  /// first violating vertex and the inequality (1 or 2) it breaks
  VertexId vertex = 0;
  int inequality = 0;
  double value = 0.0;
  double tolerance_first = 0.0;
  double tolerance_second = 0.0;
  /// min over checked vertices of -Delta u and of -Delta(|Delta u|^{p-1})
  double min_first = 0.0;
  double min_second = 0.0;
};

/// Checks -Delta u >= 0 and -Delta(|Delta u|^{p-1}) >= 0 at every x of U
/// with B(x, 2) inside U. Tolerances are 1e-10 times the sup norm of u and
/// of |Delta u|^{p-1} respectively.
SystemReport system_check(const WeightedGraph& g, const VertexSet& U, std::span<const double> u,
                          double p);

struct LiouvilleProbe {
  double q = 0.0;
  std::vector<std::uint32_t> radii;
  std::vector<double> values;
  /// slope of log2 of (increment per unit radius times radius) against
  /// log2 r over the upper half; bounded when below -band
  double slope = 0.0;
  double fit_residual = 0.0;
  double band = 0.25;
  bool bounded = false;
  /// lp_parabolic_series at p = q / (q - 1) on the host profile
  SeriesVerdict series;
  bool agrees = false;
  std::vector<double> p_grid;
  std::vector<bool> p_divergent;
  /// divergence at some p implies divergence at every larger p in the grid
  bool monotone_in_p = false;
  std::string note;
};

/// lq_green at the center along the exhaustion, its trend, and the matching
/// series verdict on t.profile. These are finite-trend surrogates for
/// properties of the infinite graph.
LiouvilleProbe liouville_probe(const TruncatedGraph& t, const Exhaustion& ex, double q,
                               std::vector<double> p_grid = {1.25, 1.5, 2.0, 2.5, 3.0});

struct PoincareEstimate {
  std::uint32_t r = 0;
  std::size_t inner_size = 0;  // |B(o, r)|
  std::size_t outer_size = 0;  // |B(o, 2r) \ B(o, r)|
  /// max over non-constant f of sum_{B(o,r)} |f - f_B|^2 mu over
  /// sum_{x,y in B(o,2r)} mu_xy (f(y) - f(x))^2 (ordered pairs)
  double lambda = 0.0;
  /// lambda / r^2
  double normalized = 0.0;
};

/// Generalized eigenvalue problem on the ball: the outer layer is eliminated
/// by a Schur complement and constants by fixing f(o) = 0. Throws
/// BallTooLarge when B(o, 2r) has more than max_vertices vertices.
PoincareEstimate poincare_constant(const WeightedGraph& g, VertexId o, std::uint32_t r,
                                   std::size_t max_vertices = 4000);
/// Also requires 2r <= t.trust_radius (RadiusExceedsTrust).
PoincareEstimate poincare_constant(const TruncatedGraph& t, std::uint32_t r,
                                   std::size_t max_vertices = 4000);

struct GaussianBand {
  std::uint32_t nmax = 0;
  std::uint32_t dmax = 0;
  std::size_t samples = 0;
  /// samples with p_n(o, y) <= 0, where no positive lower constant exists
  std::size_t lower_violations = 0;
  std::size_t parity_violations = 0;  // violations with n + d odd
  /// log(p_n V(o, sqrt n)) ~ a - C d^2 / n, least squares over positive samples
  double fitted_rate = 0.0;
  double fit_residual = 0.0;
  /// C_l = 2 C, C_r = C / 2 and the extreme constants they give
  double lower_rate = 0.0;
  double upper_rate = 0.0;
  double lower_constant = 0.0;
  double upper_constant = 0.0;
  bool pass = false;
};

/// Two-sided Gaussian fit of p_n(o, y) over y in B(o, dmax) and
/// d(o, y) <= n <= nmax, with V(o, sqrt n) from t.profile. Requires
/// nmax + dmax < 2 t.trust_radius so every sampled value is exact.
GaussianBand gaussian_band(const TruncatedGraph& t, std::uint32_t nmax, std::uint32_t dmax);

struct BatteryCell {
  int d = 0;
  double p = 0.0;
  bool expected_divergent = false;
  SeriesVerdict parabolic;
  SeriesVerdict sufficient;
  bool agrees = false;
  /// sufficient divergent implies parabolic divergent
  bool dominance = false;
};

struct BatteryReport {
  std::uint64_t N = 0;
  std::vector<BatteryCell> cells;
  /// per dimension: divergence at p implies divergence at every larger p
  bool monotone_in_p = false;
  bool pass = false;
};

/// lp_parabolic_series and lp_sufficient_series on closed-form Z^d profiles
/// for every (d, p), expected divergent iff p >= d / 2. Cells run in parallel.
BatteryReport zd_battery(const std::vector<int>& dims = {2, 3, 4, 5},
                         const std::vector<double>& ps = {1.25, 1.5, 2.0, 2.5, 3.0},
                         std::uint64_t N = 10'000);

}  // namespace potlab
