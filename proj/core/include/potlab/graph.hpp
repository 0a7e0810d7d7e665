#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace potlab {

using VertexId = std::uint32_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Undirected edge as supplied to build_graph. A loop is an edge with u == v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;
};

struct Neighbor {
  VertexId vertex = 0;
  double weight = 0.0;
};

/// Finite, connected, symmetric edge-weighted graph.
///
/// Each undirected edge is stored once in edges() (with u <= v) and both
/// directions are materialized in the adjacency lists, sorted by neighbor id.
/// A loop x~x appears once in the adjacency of x and contributes its weight
/// once to the vertex weight mu(x) = sum_{y~x} mu_xy.
///
/// Values are immutable after construction; every query is const and safe to
/// call concurrently.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t vertex_count() const noexcept { return vertex_weights_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Neighbor> neighbors(VertexId x) const noexcept {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }
  std::size_t degree(VertexId x) const noexcept { return offsets_[x + 1] - offsets_[x]; }

  double vertex_weight(VertexId x) const noexcept { return vertex_weights_[x]; }
  std::span<const double> vertex_weights() const noexcept { return vertex_weights_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// mu_xy, or 0 when x and y are not adjacent.
  double edge_weight(VertexId x, VertexId y) const noexcept;
  /// P(x, y) = mu_xy / mu(x).
  double transition(VertexId x, VertexId y) const noexcept {
    return edge_weight(x, y) / vertex_weights_[x];
  }
  double loop_weight(VertexId x) const noexcept { return edge_weight(x, x); }
  bool has_loop(VertexId x) const noexcept { return loop_weight(x) > 0.0; }

  double total_measure() const noexcept;

  bool valid_vertex(VertexId x) const noexcept { return x < vertex_count(); }

 private:
  friend WeightedGraph build_graph(std::span<const Edge> edges);

  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> vertex_weights_;
  std::vector<Edge> edges_;
};

/// Builds a WeightedGraph from an undirected edge list.
///
/// The vertex count is one more than the largest endpoint index. Throws
/// Error with kind NonPositiveWeight, DuplicateEdge, Disconnected (including
/// index gaps that leave a vertex without edges) or InvalidArgument (empty
/// list).
WeightedGraph build_graph(std::span<const Edge> edges);

/// Ordered subset of the vertices of one graph with O(1) membership.
///
/// Members are kept sorted ascending, which fixes the iteration order and
/// the local indexing used by the linear solvers.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::size_t universe, std::vector<VertexId> members);

  static VertexSet all(std::size_t universe);

  std::size_t universe_size() const noexcept { return position_.size(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(VertexId x) const noexcept {
    return x < position_.size() && position_[x] != kAbsent;
  }
  /// Position of x within members(), or npos.
  std::size_t local_index(VertexId x) const noexcept {
    return contains(x) ? position_[x] : npos;
  }
  std::span<const VertexId> members() const noexcept { return members_; }
  VertexId operator[](std::size_t i) const noexcept { return members_[i]; }

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool is_subset_of(const VertexSet& other) const noexcept;
  bool operator==(const VertexSet& other) const noexcept { return members_ == other.members_; }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<VertexId> members_;
  std::vector<std::uint32_t> position_;
};

/// BFS layer data around a center o: V(o,n), |S(o,n)| and mu(S(o,n)) for
/// n = 0..max_radius(). Counts are stored as doubles so closed-form lattice
/// profiles can run to radii where the counts exceed 64-bit integers.
struct BallProfile {
  VertexId center = 0;
  std::vector<double> ball_measure;
  std::vector<double> sphere_count;
  std::vector<double> sphere_measure;

  std::size_t max_radius() const noexcept {
    return ball_measure.empty() ? 0 : ball_measure.size() - 1;
  }
  bool covers(std::size_t radius) const noexcept { return radius < ball_measure.size(); }
};

/// Graph distances from o to every vertex (number of edges on a shortest path).
std::vector<std::uint32_t> bfs_distances(const WeightedGraph& g, VertexId o);

/// Graph distance d(x, y); throws InvalidVertex for out-of-range ids.
std::uint32_t distance(const WeightedGraph& g, VertexId x, VertexId y);

/// Closed ball B(o, r) as a vertex set.
VertexSet ball(const WeightedGraph& g, VertexId o, std::uint32_t r);

/// Exact BFS layer measures up to rmax. Radii past the eccentricity of o
/// repeat the full measure with empty spheres.
BallProfile volume_profile(const WeightedGraph& g, VertexId o, std::uint32_t rmax);

/// alpha = min over directed edges (x, y), loops included, of mu_xy / mu(x).
/// Absent only for a graph without edges, which build_graph never returns.
std::optional<double> p0_constant(const WeightedGraph& g);

/// max |mu(x) P(x,y) - mu(y) P(y,x)| over stored edges.
double reversibility_defect(const WeightedGraph& g);

}  // namespace potlab
