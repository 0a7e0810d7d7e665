#include <doctest.h>

#include <array>
#include <cstdlib>
#include <map>
#include <functional>

#include "potlab/builders.hpp"
#include "potlab/error.hpp"
#include "potlab/walk.hpp"

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

// Counts lattice points with |x|_1 <= n by direct enumeration of the cube.
long long enumerate_l1_ball(int d, int n) {
  long long count = 0;
  std::vector<int> x(d, -n);
  while (true) {
    int norm = 0;
    for (int c : x) norm += std::abs(c);
    if (norm <= n) ++count;
    int k = 0;
    while (k < d && x[k] == n) x[k++] = -n;
    if (k == d) break;
    ++x[k];
  }
  return count;
}

}  // namespace

TEST_CASE("l1 ball counts match enumeration") {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 6; ++n) {
      CHECK(lattice_ball_count(d, n) == static_cast<double>(enumerate_l1_ball(d, n)));
    }
  }
  CHECK(lattice_sphere_count(3, 4) == enumerate_l1_ball(3, 4) - enumerate_l1_ball(3, 3));
}

TEST_CASE("lattice host sizes, trust region and recorded profile") {
  const TruncatedGraph t = lattice(2, 50);
  CHECK(t.graph.vertex_count() == 5101);  // 2 R^2 + 2 R + 1
  CHECK(t.trust_radius == 50);
  CHECK(t.boundary.size() == 200);        // sphere of radius 50
  CHECK(t.graph.vertex_weight(t.center) == 4.0);
  for (VertexId x : t.boundary) CHECK(t.graph.vertex_weight(x) < 4.0);
  const BallProfile closed = lattice_profile(2, 50);
  for (std::size_t n = 0; n <= 50; ++n) {
    CHECK(t.profile.ball_measure[n] == closed.ball_measure[n]);
  }
  // inside the trust region the finite profile is exact
  const BallProfile measured = volume_profile(t.graph, t.center, 49);
  for (std::size_t n = 0; n <= 49; ++n) {
    CHECK(measured.ball_measure[n] == t.profile.ball_measure[n]);
  }
}

TEST_CASE("hat lattice profile doubles the radius") {
  const BallProfile h = hat_lattice_profile(3, 10);
  for (std::uint64_t n = 0; n <= 10; ++n) {
    CHECK(h.ball_measure[n] == 6.0 * lattice_ball_count(3, 2 * n));
  }
}

TEST_CASE("lattice quotient reproduces lattice return probabilities") {
  const TruncatedGraph full = lattice(3, 6);
  const TruncatedGraph quot = lattice_quotient(3, 6);
  CHECK(quot.graph.vertex_count() < full.graph.vertex_count());
  const auto a = return_probabilities(full.graph, full.center, 11);
  const auto b = return_probabilities(quot.graph, quot.center, 11);
  for (std::size_t n = 0; n <= 11; ++n) CHECK(b[n] == doctest::Approx(a[n]).epsilon(1e-12));
  CHECK(quot.profile.ball_measure[6] == full.profile.ball_measure[6]);

  const TruncatedGraph q5 = lattice_quotient(5, 6);
  const auto c = return_probabilities(q5.graph, q5.center, 11);
  // two steps return with probability 1/10, and mu(o) = 10
  CHECK(c[2] == doctest::Approx(0.01));
  // direct distribution of the simple walk on Z^5
  std::map<std::array<int, 5>, double> dist{{{0, 0, 0, 0, 0}, 1.0}};
  for (std::size_t n = 1; n <= 11; ++n) {
    std::map<std::array<int, 5>, double> next;
    for (const auto& [x, w] : dist) {
      for (int k = 0; k < 5; ++k) {
        for (int s : {-1, 1}) {
          auto y = x;
          y[k] += s;
          next[y] += w / 10.0;
        }
      }
    }
    dist.swap(next);
    const double back = dist.count({0, 0, 0, 0, 0}) ? dist.at({0, 0, 0, 0, 0}) : 0.0;
    CHECK(c[n] == doctest::Approx(back / 10.0).epsilon(1e-12));
  }
}

TEST_CASE("Heisenberg ball sizes agree with word enumeration") {
  // tests/oracles/heisenberg_words.py 8
  const std::vector<double> words{1, 5, 17, 53, 135, 299, 593, 1069, 1793};
  const TruncatedGraph h = heisenberg(9);
  for (std::size_t n = 0; n < words.size(); ++n) {
    CHECK(h.profile.ball_measure[n] == words[n]);  // mu = 1 per vertex
  }
  CHECK(h.graph.vertex_weight(h.center) == doctest::Approx(1.0));
}

TEST_CASE("Heisenberg law") {
  const GroupLaw law = heisenberg_law();
  const GroupElement a{1, 0, 0, 0}, b{0, 1, 0, 0};
  const GroupElement ab = law.multiply(a, b), ba = law.multiply(b, a);
  // the commutator is central: ab and ba differ in the last coordinate only
  CHECK(ab[0] == ba[0]);
  CHECK(ab[1] == ba[1]);
  CHECK(std::abs(ab[2] - ba[2]) == 1);
}

TEST_CASE("Cayley builder validates its input") {
  const GroupLaw z2 = integer_lattice_law(2);
  CHECK(kind_of([&] { cayley_ball(z2, {{1, 0, 0, 0}, {0, 1, 0, 0}}, 3); }) ==
        ErrorKind::AsymmetricGenerators);
  GroupLaw broken = z2;
  broken.multiply = [](const GroupElement& x, const GroupElement& y) {
    return GroupElement{x[0] - y[0], x[1] + y[1], 0, 0};
  };
  CHECK(kind_of([&] { cayley_ball(broken, unit_steps(2), 3); }) == ErrorKind::NotAGroup);
  CHECK(kind_of([&] { cayley_ball(z2, {}, 3); }) == ErrorKind::InvalidArgument);
  BuildLimits small;
  small.max_vertices = 100;
  CHECK(kind_of([&] { cayley_ball(z2, unit_steps(2), 50, small); }) == ErrorKind::SizeLimit);

  const TruncatedGraph c = cayley_ball(z2, unit_steps(2), 10);
  CHECK(c.graph.vertex_count() == 221);
  CHECK(c.graph.vertex_weight(c.center) == doctest::Approx(1.0));

  auto with_identity = unit_steps(2);
  with_identity.push_back(z2.identity);
  const TruncatedGraph lazy = cayley_ball(z2, with_identity, 4);
  CHECK(lazy.graph.loop_weight(lazy.center) == doctest::Approx(0.2));
}

TEST_CASE("exhaustions") {
  const TruncatedGraph t = lattice(2, 10);
  const Exhaustion ex = exhaustion_of(t, {2, 5, 9});
  REQUIRE(ex.size() == 3);
  CHECK(ex.sets[0].size() == 13);
  CHECK(ex.sets[0].is_subset_of(ex.sets[1]));
  CHECK(kind_of([&] { exhaustion_of(t, {5, 5}); }) == ErrorKind::NotIncreasing);
  CHECK(kind_of([&] { exhaustion_of(t, {5, 10}); }) == ErrorKind::RadiusExceedsTrust);
  CHECK(kind_of([&] { exhaustion_of(t, {}); }) == ErrorKind::InvalidArgument);
}
