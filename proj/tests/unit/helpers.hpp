#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab::testing {

inline WeightedGraph path_graph(VertexId n, double w = 1.0) {
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return build_graph(edges);
}

// Connected random graph: a random spanning tree plus extra edges, weights
// in [0.2, 2], optional loops.
inline WeightedGraph random_graph(std::mt19937_64& rng, VertexId n, double extra = 1.0,
                                  bool loops = false) {
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  std::vector<Edge> edges;
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  for (VertexId v = 1; v < n; ++v) {
    const VertexId u = std::uniform_int_distribution<VertexId>(0, v - 1)(rng);
    edges.push_back({u, v, weight(rng)});
    used[u][v] = 1;
  }
  const auto extras = static_cast<std::size_t>(extra * n);
  for (std::size_t k = 0; k < extras; ++k) {
    VertexId u = std::uniform_int_distribution<VertexId>(0, n - 1)(rng);
    VertexId v = std::uniform_int_distribution<VertexId>(0, n - 1)(rng);
    if (u > v) std::swap(u, v);
    if (u == v && !loops) continue;
    if (used[u][v]) continue;
    used[u][v] = 1;
    edges.push_back({u, v, weight(rng)});
  }
  return build_graph(edges);
}

inline VertexSet random_proper_subset(std::mt19937_64& rng, std::size_t n, std::size_t size) {
  std::vector<VertexId> all(n);
  for (VertexId i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, n - 1));
  std::sort(all.begin(), all.end());
  return VertexSet(n, all);
}

}  // namespace potlab::testing

namespace potlab::testing {

// Dense Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

// g^U(., y) by dense elimination of (I - P^U) v = delta_y / mu(y).
inline std::vector<double> dense_green_column(const WeightedGraph& g, const VertexSet& U,
                                              VertexId y) {
  const std::size_t n = U.size();
  std::vector<double> a(n * n, 0.0), b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = 1.0;
    for (const Neighbor& nb : g.neighbors(U[i])) {
      const std::size_t j = U.local_index(nb.vertex);
      if (j != npos) a[i * n + j] -= nb.weight / g.vertex_weight(U[i]);
    }
  }
  b[U.local_index(y)] = 1.0 / g.vertex_weight(y);
  const std::vector<double> local = dense_solve(a, b);
  std::vector<double> out(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < n; ++i) out[U[i]] = local[i];
  return out;
}

}  // namespace potlab::testing
