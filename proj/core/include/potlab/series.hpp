#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual
};

/// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// V(o, r) ~ prefactor * r^exponent fitted on log-log data over [rmin, rmax].
struct PowerFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
};
PowerFit fit_volume_power(const BallProfile& profile, std::size_t rmin, std::size_t rmax);

struct Checkpoint {
  std::uint64_t n = 0;
  double partial_sum = 0.0;
};

enum class SeriesModel {
  Convergent,
  LogDivergent,
  PowerDivergent,
  /// A term of the series is itself the tail of a divergent series.
  InnerDivergent,
};

std::string to_string(SeriesModel model);

/// Partial sums at checkpoints plus a fitted convergence class.
///
/// The class comes from the slope s of log2 of the increments
/// S(N_j) - S(N_{j-1}) between doubling checkpoints, fitted over the upper
/// half of the checkpoints: s < -band is convergent, |s| <= band is
/// log-divergent, s > band is power-divergent with exponent s.
struct SeriesVerdict {
  std::vector<Checkpoint> checkpoints;
  SeriesModel model = SeriesModel::Convergent;
  double slope = 0.0;
  double exponent = 0.0;
  double fit_residual = 0.0;
  bool tail_extended = false;
  std::string note;

  bool divergent() const noexcept { return model != SeriesModel::Convergent; }
  double final_sum() const noexcept {
    return checkpoints.empty() ? 0.0 : checkpoints.back().partial_sum;
  }
};

/// 1, 2, 4, ..., up to N, with N itself appended.
std::vector<std::uint64_t> doubling_checkpoints(std::uint64_t first, std::uint64_t N);

/// Sums terms[first..N] recording partial sums at doubling checkpoints, then
/// classifies. `terms` is indexed by n.
SeriesVerdict summarize_series(std::span<const double> terms, std::uint64_t first,
                               double band = 0.25);

SeriesVerdict classify_checkpoints(std::vector<Checkpoint> checkpoints, double band = 0.25);

}  // namespace potlab
