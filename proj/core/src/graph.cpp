#include "potlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <unordered_set>

#include "potlab/error.hpp"

namespace potlab {

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

}  // namespace

double WeightedGraph::edge_weight(VertexId x, VertexId y) const noexcept {
  const auto nbrs = neighbors(x);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), y,
                                   [](const Neighbor& n, VertexId v) { return n.vertex < v; });
  return (it != nbrs.end() && it->vertex == y) ? it->weight : 0.0;
}

double WeightedGraph::total_measure() const noexcept {
  double total = 0.0;
  for (double w : vertex_weights_) total += w;
  return total;
}

WeightedGraph build_graph(std::span<const Edge> edges) {
  if (edges.empty()) throw Error(ErrorKind::InvalidArgument, "edge list is empty");

  VertexId max_vertex = 0;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorKind::NonPositiveWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has weight " +
                      std::to_string(e.weight));
    }
    if (!seen.insert(edge_key(e.u, e.v)).second) {
      throw Error(ErrorKind::DuplicateEdge,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") listed twice");
    }
    max_vertex = std::max({max_vertex, e.u, e.v});
  }

  const std::size_t n = static_cast<std::size_t>(max_vertex) + 1;
  WeightedGraph g;
  g.vertex_weights_.assign(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    const Edge canon{std::min(e.u, e.v), std::max(e.u, e.v), e.weight};
    g.edges_.push_back(canon);
    ++degree[canon.u];
    if (canon.u != canon.v) ++degree[canon.v];
  }
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  g.offsets_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) g.offsets_[x + 1] = g.offsets_[x] + degree[x];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[fill[e.u]++] = {e.v, e.weight};
    g.vertex_weights_[e.u] += e.weight;
    if (e.u != e.v) {
      g.adjacency_[fill[e.v]++] = {e.u, e.weight};
      g.vertex_weights_[e.v] += e.weight;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    std::sort(g.adjacency_.begin() + g.offsets_[x], g.adjacency_.begin() + g.offsets_[x + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  const auto dist = bfs_distances(g, 0);
  const auto missing = std::count(dist.begin(), dist.end(), kUnreached);
  if (missing > 0) {
    throw Error(ErrorKind::Disconnected,
                std::to_string(missing) + " of " + std::to_string(n) +
                    " vertices are unreachable from vertex 0");
  }
  return g;
}

VertexSet::VertexSet(std::size_t universe, std::vector<VertexId> members)
    : members_(std::move(members)), position_(universe, kAbsent) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] >= universe) {
      throw Error(ErrorKind::InvalidVertex, "vertex " + std::to_string(members_[i]) +
                                                " outside universe of size " +
                                                std::to_string(universe));
    }
    position_[members_[i]] = static_cast<std::uint32_t>(i);
  }
}

VertexSet VertexSet::all(std::size_t universe) {
  std::vector<VertexId> members(universe);
  for (std::size_t i = 0; i < universe; ++i) members[i] = static_cast<VertexId>(i);
  return VertexSet(universe, std::move(members));
}

bool VertexSet::is_subset_of(const VertexSet& other) const noexcept {
  return std::all_of(members_.begin(), members_.end(),
                     [&](VertexId x) { return other.contains(x); });
}

std::vector<std::uint32_t> bfs_distances(const WeightedGraph& g, VertexId o) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreached);
  std::vector<VertexId> queue;
  queue.reserve(g.vertex_count());
  dist[o] = 0;
  queue.push_back(o);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId x = queue[head];
    for (const Neighbor& nb : g.neighbors(x)) {
      if (dist[nb.vertex] == kUnreached) {
        dist[nb.vertex] = dist[x] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  return dist;
}

std::uint32_t distance(const WeightedGraph& g, VertexId x, VertexId y) {
  if (!g.valid_vertex(x) || !g.valid_vertex(y)) {
    throw Error(ErrorKind::InvalidVertex, "distance query outside the graph");
  }
  if (x == y) return 0;
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreached);
  std::deque<VertexId> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    const VertexId z = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : g.neighbors(z)) {
      if (dist[nb.vertex] != kUnreached) continue;
      dist[nb.vertex] = dist[z] + 1;
      if (nb.vertex == y) return dist[nb.vertex];
      queue.push_back(nb.vertex);
    }
  }
  return kUnreached;
}

VertexSet ball(const WeightedGraph& g, VertexId o, std::uint32_t r) {
  const auto dist = bfs_distances(g, o);
  std::vector<VertexId> members;
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] <= r) members.push_back(static_cast<VertexId>(x));
  }
  return VertexSet(g.vertex_count(), std::move(members));
}

BallProfile volume_profile(const WeightedGraph& g, VertexId o, std::uint32_t rmax) {
  if (!g.valid_vertex(o)) throw Error(ErrorKind::InvalidVertex, "profile center outside graph");
  const auto dist = bfs_distances(g, o);
  BallProfile profile;
  profile.center = o;
  profile.sphere_count.assign(rmax + 1, 0.0);
  profile.sphere_measure.assign(rmax + 1, 0.0);
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] <= rmax) {
      profile.sphere_count[dist[x]] += 1.0;
      profile.sphere_measure[dist[x]] += g.vertex_weight(static_cast<VertexId>(x));
    }
  }
  profile.ball_measure.resize(rmax + 1);
  double running = 0.0;
  for (std::size_t n = 0; n <= rmax; ++n) {
    running += profile.sphere_measure[n];
    profile.ball_measure[n] = running;
  }
  return profile;
}

std::optional<double> p0_constant(const WeightedGraph& g) {
  std::optional<double> alpha;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    const double mu = g.vertex_weight(static_cast<VertexId>(x));
    for (const Neighbor& nb : g.neighbors(static_cast<VertexId>(x))) {
      const double ratio = nb.weight / mu;
      if (!alpha || ratio < *alpha) alpha = ratio;
    }
  }
  return alpha;
}

double reversibility_defect(const WeightedGraph& g) {
  double worst = 0.0;
  for (const Edge& e : g.edges()) {
    const double forward = g.vertex_weight(e.u) * g.transition(e.u, e.v);
    const double backward = g.vertex_weight(e.v) * g.transition(e.v, e.u);
    worst = std::max(worst, std::abs(forward - backward));
  }
  return worst;
}

}  // namespace potlab
