#include <doctest.h>

#include "helpers.hpp"
#include "potlab/builders.hpp"
#include "potlab/error.hpp"
#include "potlab/smoothing.hpp"

using namespace potlab;

TEST_CASE("smoothing coefficients satisfy the two-term recurrence") {
  // sum_n (x (1 + x) / 2)^n = 1 / (1 - (x + x^2) / 2) gives
  // c_k = (c_{k-1} + c_{k-2}) / 2 with c_0 = 1, c_1 = 1/2
  const SmoothingCoefficients c = coefficients(64);
  REQUIRE(c.c.size() == 2 * 64 + 2);
  std::vector<Rational> r{Rational(1), Rational(1, 2)};
  for (std::size_t k = 2; k < c.c.size(); ++k) r.push_back((r[k - 1] + r[k - 2]) / 2);
  for (std::size_t k = 0; k < c.c.size(); ++k) CHECK(c.c[k] == r[k]);
  CHECK(c.c[2] == Rational(3, 4));
  CHECK(c.c[3] == Rational(5, 8));
  CHECK(c.a[1] == 3);
  CHECK(c.a[2] == 11);
  CHECK(c.a_bar[1] == 5);
  CHECK(c.a_bar[2] == 21);
  CHECK(c.b[2] == 8);
  CHECK(c.b_bar[2] == 16);
  // c_k tends to the reciprocal of the pole derivative, 2/3
  CHECK(std::abs(c.c.back().convert_to<double>() - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("closed forms of b_k and b_bar_k hold exactly") {
  const SmoothingCoefficients c = coefficients(64);
  for (std::size_t k = 2; k <= 64; ++k) {
    const BigInt two_pow = BigInt(1) << (2 * k - 1);
    CHECK(c.b[k] == Rational(two_pow));
    CHECK(c.b_bar[k] == Rational(two_pow * 2));
  }
  for (const auto& ck : c.c) {
    CHECK(ck >= Rational(1, 2));
    CHECK(ck <= 1);
  }
  CHECK(coefficient_identity_failures(c).empty());
  SmoothingCoefficients broken = c;
  broken.b[5] += 1;
  CHECK(coefficient_identity_failures(broken).size() >= 1);
}

TEST_CASE("hat graph of a path with unit weights") {
  const WeightedGraph g = testing::path_graph(4);
  const WeightedGraph h = hat_graph(g);
  for (VertexId x = 0; x < 4; ++x) CHECK(h.vertex_weight(x) == g.vertex_weight(x));
  // mu^_00 = 1/2 sum_z mu_0z mu_z0 / mu(z) = 1/2 * 1/2; mu^_01 = 1/2
  CHECK(h.loop_weight(0) == doctest::Approx(0.25));
  CHECK(h.edge_weight(0, 1) == doctest::Approx(0.5));
  CHECK(h.edge_weight(0, 2) == doctest::Approx(0.25));
  CHECK(h.edge_weight(1, 1) == doctest::Approx(0.5 * (1.0 / 1.0 + 1.0 / 2.0)));
  CHECK(h.edge_weight(0, 3) == 0.0);
}

TEST_CASE("hat transitions are (P + P^2) / 2") {
  std::mt19937_64 rng(37);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = static_cast<VertexId>(8 + 4 * trial);
    const WeightedGraph g = testing::random_graph(rng, n, 1.0, trial % 2 == 1);
    const WeightedGraph h = hat_graph(g);
    for (VertexId x = 0; x < n; ++x) {
      for (VertexId y = 0; y < n; ++y) {
        double two = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) {
          two += g.transition(x, nb.vertex) * g.transition(nb.vertex, y);
        }
        worst = std::max(worst, std::abs(h.transition(x, y) - 0.5 * (g.transition(x, y) + two)));
      }
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("binomial identity for hat powers") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const WeightedGraph g = testing::random_graph(rng, 10, 1.0, trial % 2 == 0);
    CHECK(binomial_identity_check(g, 4, Arithmetic::Exact) == 0.0);
    CHECK(binomial_identity_check(g, 8) <= 1e-12);
  }
  const TruncatedGraph t = lattice(2, 12);
  CHECK_THROWS_AS(binomial_identity_check(t.graph, 3, Arithmetic::Exact), Error);
}

TEST_CASE("partial-sum sandwich") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    const WeightedGraph g = testing::random_graph(rng, 10, 1.0);
    for (std::size_t l = 0; l <= 4; ++l) CHECK(sandwich_check(g, l, Arithmetic::Exact).pass);
    const SandwichReport r = sandwich_check(g, 6);
    CHECK(r.pass);
    CHECK(r.lower_margin >= -1e-12);
    CHECK(r.coarse_upper_margin >= -1e-12);
  }
}

TEST_CASE("hat structure on Z^2 and Heisenberg hosts") {
  const TruncatedGraph z2 = lattice(2, 14);
  const StructureReport a = structure_report(z2.graph, 20, 5, 7);
  CHECK(a.pass);
  CHECK(a.vertex_weight_defect == 0.0);
  CHECK(a.exact_weight_mismatches == 0);
  CHECK(a.loops_everywhere);
  CHECK(a.ball_mismatches == 0);
  CHECK(a.balls_checked == 120);
  const TruncatedGraph he = heisenberg(10);
  const StructureReport b = structure_report(he.graph, 20, 5, 7);
  CHECK(b.pass);
  CHECK(b.delta_condition);
  CHECK(b.exact_weight_mismatches == 0);
  CHECK(b.distance_violations == 0);
}

TEST_CASE("hat truncation keeps the trust region and doubles profile radii") {
  const TruncatedGraph t = lattice(2, 20);
  const TruncatedGraph h = hat_truncated(t);
  CHECK(h.trust_radius == 10);
  for (std::size_t n = 0; n <= 10; ++n) CHECK(h.profile.ball_measure[n] == t.profile.ball_measure[2 * n]);
  const BallProfile inside = volume_profile(h.graph, h.center, 9);
  for (std::size_t n = 0; n <= 9; ++n) CHECK(inside.ball_measure[n] == h.profile.ball_measure[n]);
}

TEST_CASE("hat Green partial sums lie between half and full sums") {
  const TruncatedGraph t = lattice(2, 30);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  const auto dist = bfs_distances(t.graph, t.center);
  for (VertexId y = 0; y < dist.size() && pairs.size() < 6; ++y) {
    if (dist[y] <= 3) pairs.emplace_back(t.center, y);
  }
  const GreenComparisonReport r = green_comparison_check(t, 10, pairs);
  CHECK(r.pass);
  CHECK(r.entries.size() == pairs.size());
}
