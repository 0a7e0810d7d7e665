#include <doctest.h>

#include <cmath>
#include <functional>

#include "helpers.hpp"
#include "potlab/builders.hpp"
#include "potlab/capacity.hpp"
#include "potlab/error.hpp"

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

struct P4 {
  WeightedGraph g = testing::path_graph(4);
  VertexSet U{4, {1, 2}};
  VertexSet K{4, {1}};
};

// Singleton K = {k}: nu = t delta_k, ||G^U f||_q = t ||g^U(., k)||_q, so the
// capacity is (sum_z g^U(z, k)^q mu(z))^{-(p-1)}.
double singleton_oracle(const WeightedGraph& g, const VertexSet& U, VertexId k, double p) {
  const double q = p / (p - 1.0);
  const auto col = testing::dense_green_column(g, U, k);
  double s = 0.0;
  for (VertexId z : U) s += std::pow(col[z], q) * g.vertex_weight(z);
  return std::pow(s, -(p - 1.0));
}

// p = 2: max over nu >= 0 of nu(K)^2 / nu^T Q nu with Q_ij = sum_z g(z, k_i) g(z, k_j) mu(z),
// by enumerating supports.
double quadratic_oracle(const WeightedGraph& g, const VertexSet& U, const VertexSet& K) {
  const std::size_t m = K.size();
  std::vector<std::vector<double>> cols;
  for (VertexId k : K) cols.push_back(testing::dense_green_column(g, U, k));
  std::vector<double> Q(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (VertexId z : U) Q[i * m + j] += cols[i][z] * cols[j][z] * g.vertex_weight(z);
    }
  }
  double best = 0.0;
  for (std::size_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) S.push_back(i);
    }
    std::vector<double> a(S.size() * S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      for (std::size_t j = 0; j < S.size(); ++j) a[i * S.size() + j] = Q[S[i] * m + S[j]];
    }
    const auto nu = testing::dense_solve(a, std::vector<double>(S.size(), 1.0));
    if (*std::min_element(nu.begin(), nu.end()) < 0.0) continue;
    double value = 0.0;
    for (double v : nu) value += v;
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

TEST_CASE("P4 instance: all formulations give 0.9") {
  const P4 inst;
  const CapacityProblem problem{&inst.g, inst.U, inst.K, 2.0};
  CHECK(capacity_dual(problem).value == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(capacity_potential(problem).value == doctest::Approx(0.9).epsilon(1e-7));
  CHECK(capacity_laplacian(problem).value == doctest::Approx(0.9).epsilon(1e-9));
  const EquivalenceReport r = equivalence_report(problem);
  CHECK(r.agree);
  CHECK(r.pass);
  CHECK(r.max_deviation <= 1e-6);
}

TEST_CASE("P4 harmonic capacity uses ordered pairs") {
  const P4 inst;
  const HarmonicCapacity h = harmonic_capacity(inst.g, inst.U, inst.K);
  CHECK(h.solution.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(h.total_variation == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(h.charge == doctest::Approx(1.5).epsilon(1e-12));
  // v = (0, 1, 1/2, 0)
  CHECK(h.solution.optimizer[2] == doctest::Approx(0.5));
  CHECK(h.equilibrium_measure[1] == doctest::Approx(1.5));
  CHECK(h.equilibrium_measure[0] == doctest::Approx(-1.0));
  CHECK(h.equilibrium_measure[3] == doctest::Approx(-0.5));
  const HarmonicCapacity lit = harmonic_capacity(inst.g, inst.U, inst.K, EnergyRange::Literal);
  CHECK(lit.solution.value == doctest::Approx(0.5));
}

TEST_CASE("p-energy capacity on a path: equal steps on each side") {
  // f = 1 at vertex 1, f = 0 at 0 and 3; the right side descends in two steps,
  // so the ordered-pair energy is 2 (1 + 2 (1/2)^p)
  const P4 inst;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const CapacitySolution s = p_energy_capacity(inst.g, inst.K, inst.U, p);
    CHECK(s.value == doctest::Approx(2.0 * (1.0 + 2.0 * std::pow(0.5, p))).epsilon(1e-8));
  }
  const TruncatedGraph t = lattice(2, 8);
  const VertexSet U = ball(t.graph, t.center, 5), K = ball(t.graph, t.center, 1);
  const double harm = harmonic_capacity(t.graph, U, K).solution.value;
  CHECK(p_energy_capacity(t.graph, K, U, 2.0).value == doctest::Approx(harm).epsilon(1e-8));
  CHECK(p_energy_capacity(t.graph, K, t.center, 5, 2.0).value ==
        doctest::Approx(harm).epsilon(1e-8));
}

TEST_CASE("singleton capacities against the Green oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightedGraph g = testing::random_graph(rng, 30, 1.0);
    const VertexSet U = testing::random_proper_subset(rng, 30, 18);
    const VertexSet K(30, {U[4]});
    for (double p : {1.5, 2.0, 3.0}) {
      const double oracle = singleton_oracle(g, U, U[4], p);
      const CapacityProblem problem{&g, U, K, p};
      CHECK(capacity_dual(problem).value == doctest::Approx(oracle).epsilon(1e-7));
      CHECK(capacity_potential(problem).value == doctest::Approx(oracle).epsilon(1e-5));
      CHECK(capacity_laplacian(problem).value == doctest::Approx(oracle).epsilon(1e-5));
    }
  }
}

TEST_CASE("p = 2 capacities of larger K against support enumeration") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightedGraph g = testing::random_graph(rng, 40, 1.0);
    const VertexSet U = testing::random_proper_subset(rng, 40, 28);
    const VertexSet K(40, {U[1], U[6], U[13], U[20]});
    const double oracle = quadratic_oracle(g, U, K);
    const CapacityProblem problem{&g, U, K, 2.0};
    CHECK(capacity_dual(problem).value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(capacity_laplacian(problem).value == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(capacity_potential(problem).value == doctest::Approx(oracle).epsilon(1e-5));
  }
}

TEST_CASE("capacity order properties on a lattice ball") {
  const TruncatedGraph t = lattice(2, 7);
  const VertexSet U = ball(t.graph, t.center, 5);
  const VertexSet K = ball(t.graph, t.center, 1);
  EquivalenceChecks checks;
  checks.monotone.emplace_back(VertexSet(t.graph.vertex_count(), {t.center}), K);
  checks.subadditive.emplace_back(VertexSet(t.graph.vertex_count(), {t.center}), K);
  checks.domains = {ball(t.graph, t.center, 2), ball(t.graph, t.center, 4), U};
  for (double p : {1.5, 3.0}) {
    const EquivalenceReport r = equivalence_report(CapacityProblem{&t.graph, U, K, p}, checks);
    CHECK(r.pass);
    CHECK(r.order_checks.size() == 4);  // two consecutive domain pairs included
    REQUIRE(r.domain_values.size() == 3);
    CHECK(r.domain_values[0] >= r.domain_values[1]);
    CHECK(r.domain_values[1] >= r.domain_values[2]);
    CHECK(r.max_relative_deviation <= 1e-3);
  }
}

TEST_CASE("capacity input validation") {
  const P4 inst;
  CHECK(kind_of([&] { capacity_dual({&inst.g, inst.U, inst.K, 0.5}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { capacity_dual({&inst.g, inst.U, inst.K, 1.0}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { capacity_dual({&inst.g, inst.U, VertexSet(4, {3}), 2.0}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { capacity_dual({&inst.g, inst.U, VertexSet(4, {}), 2.0}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { capacity_dual({&inst.g, VertexSet::all(4), inst.K, 2.0}); }) ==
        ErrorKind::SingularSystem);
  CHECK(kind_of([&] { harmonic_capacity(inst.g, inst.U, VertexSet(4, {0})); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("equivalence violations carry the three values") {
  const P4 inst;
  EquivalenceChecks checks;
  // order check that must fail: the larger set cannot have smaller capacity
  checks.monotone.emplace_back(VertexSet(4, {1, 2}), VertexSet(4, {1}));
  try {
    equivalence_report(CapacityProblem{&inst.g, inst.U, inst.K, 2.0}, checks);
    FAIL("expected a violation");
  } catch (const EquivalenceViolation& e) {
    CHECK(e.kind() == ErrorKind::EquivalenceViolation);
    CHECK(e.values()[0] == doctest::Approx(0.9));
    CHECK_FALSE(e.report().pass);
  }
}
