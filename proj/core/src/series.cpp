#include "potlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "potlab/error.hpp"

namespace potlab {

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "line fit needs at least two paired points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "line fit with constant abscissa");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

PowerFit fit_volume_power(const BallProfile& profile, std::size_t rmin, std::size_t rmax) {
  if (rmin < 1 || rmax <= rmin) {
    throw Error(ErrorKind::InvalidArgument, "power fit needs 1 <= rmin < rmax");
  }
  if (!profile.covers(rmax)) {
    throw Error(ErrorKind::InsufficientProfile,
                "profile ends at radius " + std::to_string(profile.max_radius()) +
                    ", fit needs " + std::to_string(rmax));
  }
  std::vector<double> xs, ys;
  for (std::size_t r = rmin; r <= rmax; ++r) {
    xs.push_back(std::log(static_cast<double>(r)));
    ys.push_back(std::log(profile.ball_measure[r]));
  }
  const LineFit line = fit_line(xs, ys);
  return {line.slope, std::exp(line.intercept), line.residual};
}

std::string to_string(SeriesModel model) {
  switch (model) {
    case SeriesModel::Convergent: return "convergent";
    case SeriesModel::LogDivergent: return "log-divergent";
    case SeriesModel::PowerDivergent: return "power-divergent";
    case SeriesModel::InnerDivergent: return "inner-divergent";
  }
  return "unknown";
}

std::vector<std::uint64_t> doubling_checkpoints(std::uint64_t first, std::uint64_t N) {
  std::vector<std::uint64_t> points;
  for (std::uint64_t n = std::max<std::uint64_t>(first, 1); n <= N; n *= 2) points.push_back(n);
  if (points.empty() || points.back() != N) points.push_back(N);
  return points;
}

SeriesVerdict summarize_series(std::span<const double> terms, std::uint64_t first, double band) {
  if (terms.size() <= first) {
    throw Error(ErrorKind::InsufficientProfile, "series has no terms past the first index");
  }
  const std::uint64_t N = terms.size() - 1;
  const auto marks = doubling_checkpoints(first, N);
  std::vector<Checkpoint> checkpoints;
  double sum = 0.0;
  std::size_t next = 0;
  for (std::uint64_t n = first; n <= N; ++n) {
    sum += terms[n];
    if (next < marks.size() && n == marks[next]) {
      checkpoints.push_back({n, sum});
      ++next;
    }
  }
  return classify_checkpoints(std::move(checkpoints), band);
}

SeriesVerdict classify_checkpoints(std::vector<Checkpoint> checkpoints, double band) {
  SeriesVerdict verdict;
  verdict.checkpoints = std::move(checkpoints);
  const auto& cps = verdict.checkpoints;

  std::vector<double> xs, ys;
  bool exhausted = false;
  for (std::size_t j = 1; j < cps.size(); ++j) {
    if (cps[j].n != 2 * cps[j - 1].n) continue;
    const double increment = cps[j].partial_sum - cps[j - 1].partial_sum;
    if (!(increment > 1e-15 * std::abs(cps[j].partial_sum))) {
      exhausted = true;
      xs.clear();
      ys.clear();
      continue;
    }
    xs.push_back(std::log2(static_cast<double>(cps[j].n)));
    ys.push_back(std::log2(increment));
  }
  if (exhausted && xs.size() < 3) {
    verdict.model = SeriesModel::Convergent;
    verdict.slope = -std::numeric_limits<double>::infinity();
    verdict.note = "increments fell below rounding level";
    return verdict;
  }
  if (xs.size() < 3) {
    throw Error(ErrorKind::InsufficientProfile,
                "classification needs at least three doubling increments");
  }
  const std::size_t keep = std::max<std::size_t>(3, (xs.size() + 1) / 2);
  const std::size_t start = xs.size() - keep;
  const LineFit fit = fit_line(std::span(xs).subspan(start), std::span(ys).subspan(start));
  verdict.slope = fit.slope;
  verdict.fit_residual = fit.residual;
  if (fit.slope < -band) {
    verdict.model = SeriesModel::Convergent;
  } else if (fit.slope <= band) {
    verdict.model = SeriesModel::LogDivergent;
  } else {
    verdict.model = SeriesModel::PowerDivergent;
    verdict.exponent = fit.slope;
  }
  return verdict;
}

}  // namespace potlab
