#include <doctest.h>

#include <cmath>
#include <functional>

#include "helpers.hpp"
#include "potlab/builders.hpp"
#include "potlab/error.hpp"
#include "potlab/green.hpp"

using namespace potlab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

double defect(const WeightedGraph& g, const VertexSet& U, const FunctionTable& v,
              const FunctionTable& f) {
  const FunctionTable pv = killed_apply(g, U, v);
  double worst = 0.0;
  for (VertexId x : U) worst = std::max(worst, std::abs(v[x] - pv[x] - f[x]));
  return worst;
}

}  // namespace

TEST_CASE("Green operator inverts I - P^U on random hosts") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  double worst = 0.0, worst_series = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<VertexId>(std::uniform_int_distribution<int>(5, 60)(rng));
    const WeightedGraph g = testing::random_graph(rng, n, 1.0, trial % 3 == 0);
    const auto size = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const VertexSet U = testing::random_proper_subset(rng, n, size);
    FunctionTable f(n, 0.0);
    for (VertexId x : U) f[x] = value(rng);
    const FunctionTable v = green_operator_apply(g, U, f);
    worst = std::max(worst, defect(g, U, v, f));
    const SeriesGreen s = killed_series_green(g, U, f, 1e-12);
    if (s.certified) {
      for (VertexId x : U) worst_series = std::max(worst_series, std::abs(s.values[x] - v[x]));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(worst_series <= 1e-8);
}

TEST_CASE("Green function on a path has the closed form of the killed walk") {
  // U = {1, ..., n-2} in a path of n vertices; g^U(x, y) = 2 (x)(L - y) / L / mu, x <= y
  const VertexId n = 12;
  const WeightedGraph g = testing::path_graph(n);
  std::vector<VertexId> inner;
  for (VertexId x = 1; x + 1 < n; ++x) inner.push_back(x);
  const VertexSet U(n, inner);
  const double L = n - 1;
  const GreenColumn col = local_green(g, U, 4);
  for (VertexId x = 1; x + 1 < n; ++x) {
    const double a = std::min<double>(x, 4), b = std::max<double>(x, 4);
    CHECK(col.values[x] == doctest::Approx(a * (L - b) / L).epsilon(1e-10));
  }
  CHECK(col.values[0] == 0.0);
  CHECK(col.values[n - 1] == 0.0);
}

TEST_CASE("Green function is symmetric") {
  std::mt19937_64 rng(77);
  const WeightedGraph g = testing::random_graph(rng, 40, 1.2);
  const VertexSet U = testing::random_proper_subset(rng, 40, 30);
  const GreenColumn a = local_green(g, U, U[3]);
  const GreenColumn b = local_green(g, U, U[20]);
  CHECK(a.values[U[20]] == doctest::Approx(b.values[U[3]]).epsilon(1e-10));
}

TEST_CASE("Green solver errors") {
  const WeightedGraph g = testing::path_graph(6);
  const VertexSet U(6, {1, 2});
  CHECK(kind_of([&] { local_green(g, U, 4); }) == ErrorKind::PoleOutsideDomain);
  CHECK(kind_of([&] { local_green(g, VertexSet::all(6), 2); }) == ErrorKind::SingularSystem);
  CHECK(kind_of([&] { green_operator_apply(g, U, FunctionTable(3, 1.0)); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("killed Z^3 Green value against the truncated-series oracle") {
  // tests/oracles/z3_killed_series.py 25 <horizon>
  const double oracle = 0.247972018602147;
  const TruncatedGraph t = lattice(3, 30);
  const GreenColumn col = local_green(t.graph, ball(t.graph, t.center, 25), t.center);
  CHECK(col.values[t.center] == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("exhaustion values increase toward the Z^3 Green value") {
  const TruncatedGraph t = lattice(3, 24);
  const Exhaustion ex = exhaustion_of(t, {4, 8, 12, 16, 23});
  const ExhaustionGreen e = exhaustion_green(t, ex, t.center, t.center);
  CHECK(e.monotone);
  REQUIRE(e.values.size() == 5);
  for (double inc : e.increments) CHECK(inc > 0.0);
  REQUIRE(e.extrapolated.has_value());
  // the infinite-lattice value is 1.516386 / 6
  CHECK(*e.extrapolated == doctest::Approx(0.2527).epsilon(0.02));
  CHECK(kind_of([&] { exhaustion_green(t, ex, t.center, 4000); }) == ErrorKind::PoleOutsideDomain);
}

TEST_CASE("lq_green equals sum of squares of the column for q = 2") {
  std::mt19937_64 rng(8);
  const WeightedGraph g = testing::random_graph(rng, 30, 1.0);
  const VertexSet U = testing::random_proper_subset(rng, 30, 20);
  const GreenColumn col = local_green(g, U, U[0]);
  double direct = 0.0;
  for (VertexId z : U) direct += col.values[z] * col.values[z] * g.vertex_weight(z);
  CHECK(lq_green(g, U, U[0], 2.0) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(lq_green(col, g, 1.0), Error);
}

TEST_CASE("Li-Yau series") {
  const BallProfile p = lattice_profile(3, 200);
  const LiYauSeries s = li_yau_series(p, 2, 200);
  double direct = 0.0;
  for (int n = 2; n <= 200; ++n) direct += n / p.ball_measure[n];
  CHECK(s.value == doctest::Approx(direct));
  CHECK(s.growth_exponent == doctest::Approx(3.0).epsilon(0.03));
  CHECK(s.tail_bounded);
  CHECK(li_yau_series(lattice_profile(2, 200), 0, 200).tail_bounded == false);
  CHECK(kind_of([&] { li_yau_series(p, 2, 300); }) == ErrorKind::InsufficientProfile);
}

TEST_CASE("Green band on a small Z^3 host") {
  const TruncatedGraph t = lattice(3, 16);
  const Exhaustion ex = exhaustion_of(t, {8, 15});
  std::vector<std::pair<VertexId, VertexId>> pairs;
  const auto dist = bfs_distances(t.graph, t.center);
  for (std::uint32_t k = 0; k <= 6; ++k) {
    for (VertexId y = 0; y < dist.size(); ++y) {
      if (dist[y] == k) {
        pairs.emplace_back(t.center, y);
        break;
      }
    }
  }
  const GreenBandReport r = green_band_check(t, ex, pairs, t.profile, 16);
  CHECK(r.entries.size() == 7);
  CHECK(r.min_ratio > 0.0);
  CHECK(r.width >= 1.0);
  CHECK(r.pass);
}
