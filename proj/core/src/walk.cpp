#include "potlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "potlab/error.hpp"

namespace potlab {

namespace {

void require_length(const WeightedGraph& g, std::size_t n, const char* what) {
  if (n != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " has length " + std::to_string(n) + ", graph has " +
                    std::to_string(g.vertex_count()) + " vertices");
  }
}

}  // namespace

void apply_markov(const WeightedGraph& g, std::span<const double> f, std::span<double> out) {
  require_length(g, f.size(), "function");
  require_length(g, out.size(), "output");
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    double acc = 0.0;
    for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * f[nb.vertex];
    out[x] = acc / g.vertex_weight(x);
  }
}

FunctionTable apply_markov(const WeightedGraph& g, std::span<const double> f) {
  FunctionTable out(g.vertex_count());
  apply_markov(g, f, out);
  return out;
}

FunctionTable apply_laplacian(const WeightedGraph& g, std::span<const double> f) {
  FunctionTable out = apply_markov(g, f);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] -= f[x];
  return out;
}

void killed_apply(const WeightedGraph& g, const VertexSet& U, std::span<const double> f,
                  std::span<double> out) {
  require_length(g, f.size(), "function");
  require_length(g, out.size(), "output");
  std::fill(out.begin(), out.end(), 0.0);
  for (VertexId x : U) {
    double acc = 0.0;
    for (const Neighbor& nb : g.neighbors(x)) {
      if (U.contains(nb.vertex)) acc += nb.weight * f[nb.vertex];
    }
    out[x] = acc / g.vertex_weight(x);
  }
}

FunctionTable killed_apply(const WeightedGraph& g, const VertexSet& U, std::span<const double> f) {
  FunctionTable out(g.vertex_count());
  killed_apply(g, U, f, out);
  return out;
}

FunctionTable killed_push(const WeightedGraph& g, const VertexSet& U, std::span<const double> r) {
  require_length(g, r.size(), "row");
  FunctionTable out(g.vertex_count(), 0.0);
  for (VertexId z : U) {
    if (r[z] == 0.0) continue;
    const double scale = r[z] / g.vertex_weight(z);
    for (const Neighbor& nb : g.neighbors(z)) {
      if (U.contains(nb.vertex)) out[nb.vertex] += scale * nb.weight;
    }
  }
  return out;
}

std::vector<double> HeatKernelSeries::diagonal() const {
  std::vector<double> diag;
  diag.reserve(values.size());
  for (const auto& table : values) diag.push_back(table[origin]);
  return diag;
}

HeatKernelSeries heat_kernel_series(const WeightedGraph& g, VertexId o, std::size_t nmax) {
  HeatKernelStream stream(g, o);
  HeatKernelSeries series;
  series.origin = o;
  series.values.reserve(nmax + 1);
  series.values.push_back(stream.current());
  for (std::size_t n = 0; n < nmax; ++n) {
    stream.advance();
    series.values.push_back(stream.current());
  }
  return series;
}

HeatKernelStream::HeatKernelStream(const WeightedGraph& g, VertexId o)
    : graph_(&g), current_(g.vertex_count(), 0.0), scratch_(g.vertex_count(), 0.0) {
  if (!g.valid_vertex(o)) throw Error(ErrorKind::InvalidVertex, "heat kernel origin outside graph");
  current_[o] = 1.0 / g.vertex_weight(o);
}

void HeatKernelStream::advance() {
  apply_markov(*graph_, current_, scratch_);
  current_.swap(scratch_);
  ++step_;
}

std::vector<double> return_probabilities(const WeightedGraph& g, VertexId o, std::size_t nmax) {
  HeatKernelStream stream(g, o);
  std::vector<double> diag{stream.current()[o]};
  diag.reserve(nmax + 1);
  for (std::size_t n = 0; n < nmax; ++n) {
    stream.advance();
    diag.push_back(stream.current()[o]);
  }
  return diag;
}

double semigroup_check(const WeightedGraph& g, const VertexSet& U, std::size_t n, std::size_t m,
                       std::size_t samples, std::uint64_t seed) {
  if (U.empty()) return 0.0;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  if (U.size() * U.size() <= samples) {
    for (VertexId x : U) {
      for (VertexId y : U) pairs.emplace_back(x, y);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, U.size() - 1);
    for (std::size_t i = 0; i < samples; ++i) pairs.emplace_back(U[pick(rng)], U[pick(rng)]);
  }

  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    // row P^U_n(x, .) forwards, columns P^U_k(., y) backwards
    FunctionTable row(g.vertex_count(), 0.0);
    row[x] = 1.0;
    for (std::size_t k = 0; k < n; ++k) row = killed_push(g, U, row);

    FunctionTable col(g.vertex_count(), 0.0);
    col[y] = 1.0;
    FunctionTable col_m;
    for (std::size_t k = 0; k < n + m; ++k) {
      if (k == m) col_m = col;
      col = killed_apply(g, U, col);
    }
    if (m == n + m) col_m = col;

    double composed = 0.0;
    for (VertexId z : U) composed += row[z] * col_m[z];
    worst = std::max(worst, std::abs(col[x] - composed));
  }
  return worst;
}

}  // namespace potlab
