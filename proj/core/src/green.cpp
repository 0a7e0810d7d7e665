#include "potlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "killed_system.hpp"
#include "potlab/error.hpp"
#include "potlab/series.hpp"

namespace potlab {

namespace {

double sup_norm(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

FunctionTable green_operator_apply(const WeightedGraph& g, const VertexSet& U,
                                   std::span<const double> f, const SolverOptions& options,
                                   SolveInfo* info) {
  if (f.size() != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "function length does not match the host");
  }
  const detail::KilledSystem system(g, U);
  std::vector<double> b(U.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    b[i] = system.mu()[i] * f[U[i]];
    scale = std::max(scale, std::abs(f[U[i]]));
  }
  std::vector<double> v;
  const auto result = system.solve(b, v, options.tolerance, scale, options.max_iterations);
  if (info) *info = {result.iterations, result.defect};
  FunctionTable out(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < U.size(); ++i) out[U[i]] = v[i];
  return out;
}

GreenColumn local_green(const WeightedGraph& g, const VertexSet& U, VertexId x0,
                        const SolverOptions& options) {
  if (!U.contains(x0)) {
    throw Error(ErrorKind::PoleOutsideDomain, "pole " + std::to_string(x0) + " is not in U");
  }
  FunctionTable f(g.vertex_count(), 0.0);
  f[x0] = 1.0 / g.vertex_weight(x0);
  GreenColumn column;
  column.domain = U;
  column.pole = x0;
  column.values = green_operator_apply(g, U, f, options, &column.info);
  return column;
}

SeriesGreen killed_series_green(const WeightedGraph& g, const VertexSet& U,
                                std::span<const double> f, double tail_tolerance,
                                std::size_t max_terms) {
  if (f.size() != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "function length does not match the host");
  }
  SeriesGreen out;
  out.values.assign(g.vertex_count(), 0.0);
  FunctionTable term(g.vertex_count(), 0.0), next(g.vertex_count());
  FunctionTable survival(g.vertex_count(), 0.0), survival_next(g.vertex_count());
  for (VertexId x : U) {
    term[x] = f[x];
    survival[x] = 1.0;
  }
  const double fnorm = sup_norm(f);
  out.tail_bound = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < max_terms; ++n) {
    for (VertexId x : U) out.values[x] += term[x];
    killed_apply(g, U, term, next);
    term.swap(next);
    killed_apply(g, U, survival, survival_next);
    survival.swap(survival_next);
    out.terms = n + 1;
    // check the bound at a geometric set of term counts
    if ((out.terms & (out.terms - 1)) == 0 || out.terms % 1024 == 0) {
      const double s = sup_norm(survival);
      if (s < 1.0) {
        out.tail_bound = static_cast<double>(out.terms) * s / (1.0 - s) * fnorm;
        if (out.tail_bound <= tail_tolerance) {
          out.certified = true;
          return out;
        }
      }
    }
  }
  return out;
}

ExhaustionGreen exhaustion_green(const TruncatedGraph& t, const Exhaustion& ex, VertexId x0,
                                 VertexId y0, const SolverOptions& options) {
  if (ex.sets.empty()) throw Error(ErrorKind::InvalidArgument, "empty exhaustion");
  if (!ex.sets.front().contains(x0) || !ex.sets.front().contains(y0)) {
    throw Error(ErrorKind::PoleOutsideDomain, "pair must lie in the smallest exhaustion set");
  }
  ExhaustionGreen out;
  out.radii = ex.radii;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const GreenColumn column = local_green(t.graph, ex.sets[i], y0, options);
    out.values.push_back(column.values[x0]);
    if (i > 0) {
      const double inc = out.values[i] - out.values[i - 1];
      out.increments.push_back(inc);
      if (inc < -1e-12) out.monotone = false;
    }
  }
  if (out.values.size() >= 3) {
    const std::size_t k = std::min<std::size_t>(4, out.values.size());
    std::vector<double> xs, ys;
    for (std::size_t i = out.values.size() - k; i < out.values.size(); ++i) {
      xs.push_back(1.0 / static_cast<double>(std::max<std::uint32_t>(out.radii[i], 1)));
      ys.push_back(out.values[i]);
    }
    out.extrapolated = fit_line(xs, ys).intercept;
  }
  return out;
}

double lq_green(const GreenColumn& column, const WeightedGraph& g, double q) {
  if (!(q > 1.0)) throw Error(ErrorKind::InvalidArgument, "q must exceed 1");
  double total = 0.0;
  for (VertexId z : column.domain) {
    total += std::pow(column.values[z], q) * g.vertex_weight(z);
  }
  return total;
}

double lq_green(const WeightedGraph& g, const VertexSet& U, VertexId x0, double q,
                const SolverOptions& options) {
  // g^U(x0, z) = g^U(z, x0), so the integrand is g^U(z, x0)^q
  return lq_green(local_green(g, U, x0, options), g, q);
}

LiYauSeries li_yau_series(const BallProfile& profile, std::uint64_t d, std::uint64_t N) {
  if (d > N) throw Error(ErrorKind::InvalidArgument, "distance exceeds the horizon");
  if (!profile.covers(N)) {
    throw Error(ErrorKind::InsufficientProfile,
                "profile ends at radius " + std::to_string(profile.max_radius()) +
                    ", series needs " + std::to_string(N));
  }
  LiYauSeries out;
  out.base = profile.center;
  out.distance = d;
  out.horizon = N;
  for (std::uint64_t n = d; n <= N; ++n) {
    out.value += static_cast<double>(n) / profile.ball_measure[n];
  }
  if (N >= 4) {
    out.growth_exponent = fit_volume_power(profile, N / 2, N).exponent;
    out.tail_bounded = out.growth_exponent > 2.0;
  }
  return out;
}

GreenBandReport green_band_check(const TruncatedGraph& t, const Exhaustion& ex,
                                 const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                 const BallProfile& profile, std::uint64_t N, double band_limit,
                                 const SolverOptions& options) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "no pairs supplied");
  if (ex.sets.empty()) throw Error(ErrorKind::InvalidArgument, "empty exhaustion");
  const VertexSet& U = ex.sets.back();
  GreenBandReport report;
  report.band_limit = band_limit;
  std::map<VertexId, FunctionTable> columns;
  for (const auto& [x, y] : pairs) {
    if (!ex.sets.front().contains(x) || !ex.sets.front().contains(y)) {
      throw Error(ErrorKind::PoleOutsideDomain, "pair must lie in the smallest exhaustion set");
    }
    auto it = columns.find(x);
    if (it == columns.end()) {
      it = columns.emplace(x, local_green(t.graph, U, x, options).values).first;
    }
    GreenBandEntry entry;
    entry.x = x;
    entry.y = y;
    entry.distance = distance(t.graph, x, y);
    entry.green = it->second[y];
    entry.series = li_yau_series(profile, entry.distance, N).value;
    entry.ratio = entry.green / entry.series;
    report.entries.push_back(entry);
  }
  report.min_ratio = report.entries.front().ratio;
  report.max_ratio = report.entries.front().ratio;
  for (const auto& e : report.entries) {
    report.min_ratio = std::min(report.min_ratio, e.ratio);
    report.max_ratio = std::max(report.max_ratio, e.ratio);
  }
  report.width = report.max_ratio / report.min_ratio;
  report.pass = report.min_ratio > 0.0 && report.width <= band_limit;
  return report;
}

}  // namespace potlab
