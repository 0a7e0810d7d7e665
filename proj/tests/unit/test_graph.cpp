#include <doctest.h>

#include <functional>
#include <sstream>

#include "helpers.hpp"
#include "potlab/edge_list.hpp"
#include "potlab/error.hpp"
#include "potlab/graph.hpp"

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

}  // namespace

TEST_CASE("vertex weights and transitions of a weighted triangle with a loop") {
  const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}, {2, 2, 0.5}};
  const WeightedGraph g = build_graph(edges);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 4);
  CHECK(g.vertex_weight(0) == 4.0);
  CHECK(g.vertex_weight(1) == 3.0);
  CHECK(g.vertex_weight(2) == 5.5);
  CHECK(g.transition(2, 2) == doctest::Approx(0.5 / 5.5));
  CHECK(g.edge_weight(2, 0) == 3.0);
  CHECK(g.edge_weight(0, 0) == 0.0);
  CHECK(g.has_loop(2));
  CHECK_FALSE(g.has_loop(1));
  CHECK(g.total_measure() == doctest::Approx(12.5));
  CHECK(reversibility_defect(g) == 0.0);
  double row = 0.0;
  for (const auto& nb : g.neighbors(2)) row += g.transition(2, nb.vertex);
  CHECK(row == doctest::Approx(1.0));
}

TEST_CASE("build_graph rejects malformed input") {
  CHECK(kind_of([] { build_graph(std::vector<Edge>{}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 0.0}}); }) == ErrorKind::NonPositiveWeight);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1, -1.0}}); }) == ErrorKind::NonPositiveWeight);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 0, 2.0}}); }) ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {2, 3, 1.0}}); }) ==
        ErrorKind::Disconnected);
  CHECK(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 3, 1.0}}); }) ==
        ErrorKind::Disconnected);
}

TEST_CASE("balls and profiles on a path") {
  const WeightedGraph g = testing::path_graph(7);
  CHECK(distance(g, 0, 6) == 6);
  CHECK(distance(g, 3, 3) == 0);
  const VertexSet b = ball(g, 3, 2);
  CHECK(b.size() == 5);
  CHECK(b.contains(1));
  CHECK_FALSE(b.contains(0));
  const BallProfile prof = volume_profile(g, 3, 5);
  // mu = 1, 2, 2, 2, 2, 2, 1
  CHECK(prof.ball_measure[0] == 2.0);
  CHECK(prof.ball_measure[1] == 6.0);
  CHECK(prof.ball_measure[3] == 12.0);
  CHECK(prof.ball_measure[5] == 12.0);
  CHECK(prof.sphere_count[3] == 2.0);
  CHECK(prof.sphere_count[4] == 0.0);
  CHECK(p0_constant(g).value() == doctest::Approx(0.5));
  CHECK(kind_of([&] { distance(g, 0, 9); }) == ErrorKind::InvalidVertex);
}

TEST_CASE("vertex sets keep sorted members and local indices") {
  const VertexSet s(10, {7, 2, 5});
  CHECK(s.size() == 3);
  CHECK(s[0] == 2);
  CHECK(s.local_index(5) == 1);
  CHECK(s.local_index(3) == npos);
  CHECK(s.is_subset_of(VertexSet::all(10)));
  CHECK_FALSE(VertexSet::all(10).is_subset_of(s));
}

TEST_CASE("edge lists round-trip bit for bit") {
  std::mt19937_64 rng(3);
  const WeightedGraph g = testing::random_graph(rng, 30, 1.5, true);
  std::stringstream buf;
  write_edge_list(buf, g);
  const WeightedGraph h = read_edge_list(buf);
  REQUIRE(h.vertex_count() == g.vertex_count());
  REQUIRE(h.edge_count() == g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    CHECK(h.edges()[i].u == g.edges()[i].u);
    CHECK(h.edges()[i].v == g.edges()[i].v);
    CHECK(h.edges()[i].weight == g.edges()[i].weight);
  }
}

TEST_CASE("edge list parser reports line errors") {
  std::stringstream bad("0 1 1.0\n1 two 1.0\n");
  CHECK(kind_of([&] { read_edge_list(bad); }) == ErrorKind::ParseError);
  std::stringstream comments("# header\n0 1 2.5  # trailing\n\n1 2 1\n");
  const WeightedGraph g = read_edge_list(comments);
  CHECK(g.vertex_count() == 3);
  CHECK(g.vertex_weight(1) == 3.5);
}
