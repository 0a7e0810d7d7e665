#include "potlab/criteria.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "potlab/error.hpp"
#include "potlab/green.hpp"
#include "potlab/parallel.hpp"

namespace potlab {

namespace {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must exceed 1");
}

void require_profile(const BallProfile& profile, std::uint64_t N) {
  if (!profile.covers(N)) {
    throw Error(ErrorKind::InsufficientProfile,
                "profile ends at radius " + std::to_string(profile.max_radius()) +
                    ", series needs " + std::to_string(N));
  }
  if (N < 8) throw Error(ErrorKind::InsufficientProfile, "series needs N >= 8");
}

struct InnerTails {
  std::vector<double> a;  // a[n] = sum_{m>=n} m / V(o, m)
  double gamma = 0.0;
  bool divergent = false;
};

InnerTails inner_tails(const BallProfile& profile, std::uint64_t N) {
  InnerTails out;
  out.gamma = fit_volume_power(profile, N / 2, N).exponent;
  double tail = 0.0;
  if (out.gamma > 2.0) {
    const double n = static_cast<double>(N);
    tail = std::pow(n, out.gamma) / profile.ball_measure[N] *
           std::pow(n + 0.5, 2.0 - out.gamma) / (out.gamma - 2.0);
  } else {
    out.divergent = true;
  }
  out.a.assign(N + 1, 0.0);
  double running = tail;
  for (std::uint64_t m = N + 1; m-- > 0;) {
    running += static_cast<double>(m) / profile.ball_measure[m];
    out.a[m] = running;
  }
  return out;
}

SeriesVerdict finish_tail_series(SeriesVerdict verdict, const InnerTails& tails) {
  verdict.tail_extended = true;
  if (tails.divergent) {
    verdict.model = SeriesModel::InnerDivergent;
    verdict.note = "inner series diverges: fitted growth exponent " +
                   std::to_string(tails.gamma) + " <= 2";
  } else {
    verdict.note = "inner tails extended with growth exponent " + std::to_string(tails.gamma);
  }
  return verdict;
}

}  // namespace

SeriesVerdict nash_williams(const BallProfile& profile, std::uint64_t N) {
  require_profile(profile, N);
  std::vector<double> terms(N + 1, 0.0);
  for (std::uint64_t n = 1; n <= N; ++n) {
    terms[n] = static_cast<double>(n) / profile.ball_measure[n];
  }
  return summarize_series(terms, 1);
}

SeriesVerdict lp_parabolic_series(const BallProfile& profile, double p, std::uint64_t N) {
  require_p(p);
  require_profile(profile, N);
  const double q = p / (p - 1.0);
  const InnerTails tails = inner_tails(profile, N);
  std::vector<double> terms(N + 1);
  for (std::uint64_t n = 0; n <= N; ++n) {
    terms[n] = std::pow(tails.a[n], q) * profile.sphere_measure[n];
  }
  return finish_tail_series(summarize_series(terms, 0), tails);
}

SeriesVerdict lp_sufficient_series(const BallProfile& profile, double p, std::uint64_t N) {
  require_p(p);
  require_profile(profile, N);
  const double e = 1.0 / (p - 1.0);
  const InnerTails tails = inner_tails(profile, N);
  std::vector<double> terms(N + 1);
  for (std::uint64_t n = 0; n <= N; ++n) {
    terms[n] = static_cast<double>(n) * std::pow(tails.a[n], e);
  }
  return finish_tail_series(summarize_series(terms, 0), tails);
}

VolumeTest corollary_volume_test(const BallProfile& profile, double p) {
  require_p(p);
  VolumeTest out;
  out.p = p;
  out.rmax = profile.max_radius();
  out.rmin = std::max<std::uint64_t>(2, out.rmax / 2);
  if (out.rmax < out.rmin + 2) {
    throw Error(ErrorKind::InsufficientProfile, "volume test needs a profile to radius 4 or more");
  }
  std::vector<double> xs, ys;
  for (std::uint64_t r = out.rmin; r <= out.rmax; ++r) {
    const double lr = std::log(static_cast<double>(r));
    const double ratio = profile.ball_measure[r] /
                         (std::pow(static_cast<double>(r), 2.0 * p) * std::pow(lr, p - 1.0));
    out.constant = std::max(out.constant, ratio);
    xs.push_back(lr);
    ys.push_back(std::log(ratio));
  }
  const LineFit fit = fit_line(xs, ys);
  out.slope = fit.slope;
  out.fit_residual = fit.residual;
  out.pass = out.slope <= out.slope_limit;
  return out;
}

SeriesVerdict diagonal_lower_series(std::span<const double> diagonal, double q) {
  if (!(q > 1.0)) throw Error(ErrorKind::InvalidArgument, "q must exceed 1");
  if (diagonal.size() < 101) {
    throw Error(ErrorKind::HorizonTooShort,
                "horizon " + std::to_string(diagonal.empty() ? 0 : diagonal.size() - 1) +
                    " is below 100");
  }
  const std::uint64_t H = diagonal.size() - 1;
  std::vector<Checkpoint> checkpoints;
  for (std::uint64_t h : doubling_checkpoints(1, H)) {
    double inner = 0.0, sum = 0.0;
    for (std::uint64_t n = h + 1; n-- > 0;) {
      inner += diagonal[n];
      sum += std::pow(inner, q - 1.0);
    }
    checkpoints.push_back({h, sum});
  }
  SeriesVerdict verdict = classify_checkpoints(std::move(checkpoints));
  // Jensen's step needs t -> t^{q-1} convex
  verdict.note = q >= 2.0 ? "lower bound for the q-Green value at the origin, by horizon"
                          : "not a lower bound for q < 2";
  return verdict;
}

SeriesVerdict diagonal_lower_series(const HeatKernelSeries& hk, double q) {
  const std::vector<double> diagonal = hk.diagonal();
  return diagonal_lower_series(diagonal, q);
}

std::string to_string(SystemStatus status) {
  switch (status) {
    case SystemStatus::Harmonic: return "harmonic";
    case SystemStatus::SuperharmonicPair: return "superharmonic-pair";
    case SystemStatus::Violation: return "violation";
  }
  return "unknown";
}

SystemReport system_check(const WeightedGraph& g, const VertexSet& U, std::span<const double> u,
                          double p) {
  if (u.size() != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "function length does not match the host");
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be at least 1");
  double unorm = 0.0;
  for (double v : u) unorm = std::max(unorm, std::abs(v));
  const double tol = 1e-10 * unorm;
  FunctionTable lap = apply_laplacian(g, u);
  // values within the rounding slack are zero; otherwise |.|^{p-1} would
  // blow rounding noise up for p < 2
  for (double& v : lap) {
    if (std::abs(v) <= tol) v = 0.0;
  }
  FunctionTable w(g.vertex_count());
  for (std::size_t x = 0; x < w.size(); ++x) {
    w[x] = lap[x] == 0.0 ? 0.0 : std::pow(std::abs(lap[x]), p - 1.0);
  }
  const FunctionTable lap_w = apply_laplacian(g, w);

  auto inside = [&](const std::vector<char>& in) {
    std::vector<char> out(g.vertex_count(), 0);
    for (VertexId x : U) {
      if (!in[x]) continue;
      bool all = true;
      for (const Neighbor& nb : g.neighbors(x)) all = all && in[nb.vertex];
      out[x] = all;
    }
    return out;
  };
  std::vector<char> in_u(g.vertex_count(), 0);
  for (VertexId x : U) in_u[x] = 1;
  const std::vector<char> core = inside(inside(in_u));

  double wnorm = 0.0;
  for (double v : w) wnorm = std::max(wnorm, v);
  SystemReport report;
  report.tolerance_first = tol;
  report.tolerance_second = 1e-10 * wnorm;
  report.min_first = std::numeric_limits<double>::infinity();
  report.min_second = std::numeric_limits<double>::infinity();
  bool harmonic = true;
  for (VertexId x : U) {
    if (!core[x]) continue;
    ++report.checked;
    const double first = -lap[x];
    const double second = -lap_w[x];
    report.min_first = std::min(report.min_first, first);
    report.min_second = std::min(report.min_second, second);
    if (report.status != SystemStatus::Violation) {
      if (first < -report.tolerance_first) {
        report.status = SystemStatus::Violation;
        report.vertex = x;
        report.inequality = 1;
        report.value = first;
      } else if (second < -report.tolerance_second) {
        report.status = SystemStatus::Violation;
        report.vertex = x;
        report.inequality = 2;
        report.value = second;
      }
    }
    if (std::abs(first) > report.tolerance_first) harmonic = false;
  }
  if (report.checked == 0) {
    throw Error(ErrorKind::InvalidArgument, "U has no vertex whose 2-ball lies in U");
  }
  if (report.status != SystemStatus::Violation) {
    report.status = harmonic ? SystemStatus::Harmonic : SystemStatus::SuperharmonicPair;
  }
  return report;
}

LiouvilleProbe liouville_probe(const TruncatedGraph& t, const Exhaustion& ex, double q,
                               std::vector<double> p_grid) {
  if (!(q > 1.0)) throw Error(ErrorKind::InvalidArgument, "q must exceed 1");
  if (ex.size() < 3) throw Error(ErrorKind::InvalidArgument, "probe needs at least three sets");
  LiouvilleProbe probe;
  probe.q = q;
  probe.radii = ex.radii;
  probe.values.assign(ex.size(), 0.0);
  parallel_for(ex.size(), [&](std::size_t i) {
    probe.values[i] = lq_green(t.graph, ex.sets[i], t.center, q);
  });

  std::vector<double> xs, ys;
  bool saturated = false;
  for (std::size_t i = 1; i < ex.size(); ++i) {
    const double inc = probe.values[i] - probe.values[i - 1];
    if (!(inc > 1e-14 * probe.values[i])) {
      saturated = true;
      continue;
    }
    const double r0 = ex.radii[i - 1], r1 = ex.radii[i];
    const double mid = 0.5 * (r0 + r1);
    xs.push_back(std::log2(mid));
    ys.push_back(std::log2(inc / (r1 - r0) * mid));
  }
  if (xs.size() >= 2) {
    const std::size_t keep = std::max<std::size_t>(2, (xs.size() + 1) / 2);
    const std::size_t start = xs.size() - keep;
    const LineFit fit = fit_line(std::span(xs).subspan(start), std::span(ys).subspan(start));
    probe.slope = fit.slope;
    probe.fit_residual = fit.residual;
    probe.bounded = fit.slope < -probe.band;
  } else {
    probe.slope = -std::numeric_limits<double>::infinity();
    probe.bounded = saturated;
  }

  const double p = q / (q - 1.0);
  probe.series = lp_parabolic_series(t.profile, p, t.trust_radius);
  probe.agrees = probe.bounded != probe.series.divergent();

  std::sort(p_grid.begin(), p_grid.end());
  probe.p_grid = p_grid;
  bool seen = false;
  probe.monotone_in_p = true;
  for (double s : p_grid) {
    const bool div = lp_parabolic_series(t.profile, s, t.trust_radius).divergent();
    probe.p_divergent.push_back(div);
    if (seen && !div) probe.monotone_in_p = false;
    seen = seen || div;
  }
  probe.note = "finite-trend surrogate on " + t.name;
  return probe;
}

PoincareEstimate poincare_constant(const WeightedGraph& g, VertexId o, std::uint32_t r,
                                   std::size_t max_vertices) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "radius must be at least 1");
  if (!g.valid_vertex(o)) throw Error(ErrorKind::InvalidVertex, "center out of range");
  const auto dist = bfs_distances(g, o);
  std::vector<VertexId> inner, outer;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (dist[x] <= r) {
      inner.push_back(x);
    } else if (dist[x] <= 2 * r) {
      outer.push_back(x);
    }
  }
  if (inner.size() + outer.size() > max_vertices) {
    throw Error(ErrorKind::BallTooLarge, "ball has " + std::to_string(inner.size() + outer.size()) +
                                             " vertices, cap is " + std::to_string(max_vertices));
  }
  if (inner.size() < 2) throw Error(ErrorKind::InvalidArgument, "inner ball is a single vertex");

  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> in_idx(g.vertex_count(), kNone), out_idx(g.vertex_count(), kNone);
  for (std::size_t i = 0; i < inner.size(); ++i) in_idx[inner[i]] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < outer.size(); ++i) out_idx[outer[i]] = static_cast<std::int64_t>(i);

  const Eigen::Index ni = static_cast<Eigen::Index>(inner.size());
  const Eigen::Index no = static_cast<Eigen::Index>(outer.size());
  // Laplacian of the subgraph induced on B(o, 2r), split into blocks
  Eigen::MatrixXd L_ii = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::MatrixXd L_oi = Eigen::MatrixXd::Zero(no, ni);
  std::vector<Eigen::Triplet<double>> oo;
  auto add = [&](VertexId x, VertexId y, double w) {
    if (in_idx[x] != kNone && in_idx[y] != kNone) {
      L_ii(in_idx[x], in_idx[y]) += w;
    } else if (out_idx[x] != kNone && in_idx[y] != kNone) {
      L_oi(out_idx[x], in_idx[y]) += w;
    } else if (out_idx[x] != kNone && out_idx[y] != kNone) {
      oo.emplace_back(out_idx[x], out_idx[y], w);
    }
  };
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    const bool in_u = dist[e.u] <= 2 * r, in_v = dist[e.v] <= 2 * r;
    if (!in_u || !in_v) continue;
    add(e.u, e.u, e.weight);
    add(e.v, e.v, e.weight);
    add(e.u, e.v, -e.weight);
    add(e.v, e.u, -e.weight);
  }
  Eigen::MatrixXd S = L_ii;
  if (no > 0) {
    Eigen::SparseMatrix<double> L_oo(no, no);
    L_oo.setFromTriplets(oo.begin(), oo.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L_oo);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorKind::SolverDiverged, "outer block factorization failed");
    }
    const Eigen::MatrixXd X = ldlt.solve(L_oi);
    S.noalias() -= L_oi.transpose() * X;
  }

  Eigen::VectorXd m(ni);
  for (Eigen::Index i = 0; i < ni; ++i) m(i) = g.vertex_weight(inner[i]);
  Eigen::MatrixXd M = -m * m.transpose() / m.sum();
  M.diagonal() += m;

  // f(o) = 0 removes the constants from both forms
  const Eigen::Index c = in_idx[o];
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ni; ++i) {
    if (i != c) keep.push_back(i);
  }
  const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd A(k, k), B(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      A(i, j) = M(keep[i], keep[j]);
      B(i, j) = 2.0 * S(keep[i], keep[j]);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B,
                                                                     Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SolverDiverged, "generalized eigenvalue solve failed");
  }
  PoincareEstimate est;
  est.r = r;
  est.inner_size = inner.size();
  est.outer_size = outer.size();
  est.lambda = solver.eigenvalues().maxCoeff();
  est.normalized = est.lambda / (static_cast<double>(r) * r);
  return est;
}

PoincareEstimate poincare_constant(const TruncatedGraph& t, std::uint32_t r,
                                   std::size_t max_vertices) {
  if (2 * static_cast<std::uint64_t>(r) > t.trust_radius) {
    throw Error(ErrorKind::RadiusExceedsTrust,
                "B(o, 2r) leaves the trust radius " + std::to_string(t.trust_radius));
  }
  return poincare_constant(t.graph, t.center, r, max_vertices);
}

GaussianBand gaussian_band(const TruncatedGraph& t, std::uint32_t nmax, std::uint32_t dmax) {
  if (nmax < 1) throw Error(ErrorKind::InvalidArgument, "nmax must be positive");
  if (static_cast<std::uint64_t>(nmax) + dmax >= 2ULL * t.trust_radius) {
    throw Error(ErrorKind::RadiusExceedsTrust,
                "nmax + dmax must stay below twice the trust radius " +
                    std::to_string(t.trust_radius));
  }
  const auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(nmax)));
  if (!t.profile.covers(root)) {
    throw Error(ErrorKind::InsufficientProfile, "profile does not reach sqrt(nmax)");
  }
  const auto dist = bfs_distances(t.graph, t.center);
  std::vector<VertexId> targets;
  for (VertexId y = 0; y < t.graph.vertex_count(); ++y) {
    if (dist[y] <= dmax) targets.push_back(y);
  }

  GaussianBand band;
  band.nmax = nmax;
  band.dmax = dmax;
  std::vector<double> ss, rhos;
  HeatKernelStream stream(t.graph, t.center);
  for (std::uint32_t n = 1; n <= nmax; ++n) {
    stream.advance();
    const auto& pn = stream.current();
    const auto sn = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const double vol = t.profile.ball_measure[sn];
    for (VertexId y : targets) {
      if (dist[y] > n) continue;
      ++band.samples;
      if (!(pn[y] > 0.0)) {
        ++band.lower_violations;
        if ((n + dist[y]) % 2 == 1) ++band.parity_violations;
        continue;
      }
      ss.push_back(static_cast<double>(dist[y]) * dist[y] / n);
      rhos.push_back(std::log(pn[y] * vol));
    }
  }
  if (ss.size() >= 2) {
    const LineFit fit = fit_line(ss, rhos);
    band.fitted_rate = std::max(0.0, -fit.slope);
    band.fit_residual = fit.residual;
    band.lower_rate = 2.0 * band.fitted_rate;
    band.upper_rate = 0.5 * band.fitted_rate;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      lo = std::min(lo, rhos[i] + band.lower_rate * ss[i]);
      hi = std::max(hi, std::exp(rhos[i] + band.upper_rate * ss[i]));
    }
    band.lower_constant = std::exp(lo);
    band.upper_constant = hi;
  }
  band.pass = band.lower_violations == 0 && band.lower_constant > 0.0 &&
              std::isfinite(band.upper_constant);
  return band;
}

BatteryReport zd_battery(const std::vector<int>& dims, const std::vector<double>& ps,
                         std::uint64_t N) {
  std::map<int, BallProfile> profiles;
  for (int d : dims) profiles.emplace(d, lattice_profile(d, N));
  BatteryReport report;
  report.N = N;
  for (int d : dims) {
    for (double p : ps) {
      BatteryCell cell;
      cell.d = d;
      cell.p = p;
      cell.expected_divergent = p >= 0.5 * d - 1e-12;
      report.cells.push_back(cell);
    }
  }
  parallel_for(report.cells.size(), [&](std::size_t i) {
    BatteryCell& cell = report.cells[i];
    const BallProfile& profile = profiles.at(cell.d);
    cell.parabolic = lp_parabolic_series(profile, cell.p, N);
    cell.sufficient = lp_sufficient_series(profile, cell.p, N);
    cell.agrees = cell.parabolic.divergent() == cell.expected_divergent;
    cell.dominance = !cell.sufficient.divergent() || cell.parabolic.divergent();
  });
  report.monotone_in_p = true;
  for (int d : dims) {
    std::vector<std::pair<double, bool>> row;
    for (const auto& cell : report.cells) {
      if (cell.d == d) row.emplace_back(cell.p, cell.parabolic.divergent());
    }
    std::sort(row.begin(), row.end());
    bool seen = false;
    for (const auto& [p, div] : row) {
      if (seen && !div) report.monotone_in_p = false;
      seen = seen || div;
    }
  }
  report.pass = report.monotone_in_p;
  for (const auto& cell : report.cells) report.pass = report.pass && cell.agrees && cell.dominance;
  return report;
}

}  // namespace potlab
