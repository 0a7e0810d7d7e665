#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

/// Real values indexed by VertexId over the whole graph. Functions that live
/// on a subset U are zero-extended.
using FunctionTable = std::vector<double>;

/// (Pf)(x) = sum_y P(x, y) f(y).
FunctionTable apply_markov(const WeightedGraph& g, std::span<const double> f);
void apply_markov(const WeightedGraph& g, std::span<const double> f, std::span<double> out);

/// Delta f = Pf - f.
FunctionTable apply_laplacian(const WeightedGraph& g, std::span<const double> f);

/// (P^U f)(x) = sum_{y in U} P(x, y) f(y) for x in U, zero outside U.
/// Values of f outside U are ignored.
FunctionTable killed_apply(const WeightedGraph& g, const VertexSet& U, std::span<const double> f);
void killed_apply(const WeightedGraph& g, const VertexSet& U, std::span<const double> f,
                  std::span<double> out);

/// Row propagation r -> r P^U, i.e. (r P^U)(y) = sum_{z in U} r(z) P(z, y)
/// for y in U. Starting from the indicator of x this yields P^U_n(x, .).
FunctionTable killed_push(const WeightedGraph& g, const VertexSet& U, std::span<const double> r);

/// p_n(o, .) for n = 0..horizon, where p_n(x, y) = P_n(x, y) / mu(y).
struct HeatKernelSeries {
  VertexId origin = 0;
  std::vector<FunctionTable> values;

  std::size_t horizon() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double at(std::size_t n, VertexId x) const { return values.at(n).at(x); }
  /// p_n(o, o) for every n.
  std::vector<double> diagonal() const;
};

HeatKernelSeries heat_kernel_series(const WeightedGraph& g, VertexId o, std::size_t nmax);

/// Streams p_n(o, .) one step at a time, keeping two tables in memory.
/// Uses p_{n+1}(o, .) = P p_n(o, .), which holds by reversibility.
class HeatKernelStream {
 public:
  HeatKernelStream(const WeightedGraph& g, VertexId o);

  std::size_t step() const noexcept { return step_; }
  const FunctionTable& current() const noexcept { return current_; }
  void advance();

 private:
  const WeightedGraph* graph_;
  std::size_t step_ = 0;
  FunctionTable current_;
  FunctionTable scratch_;
};

/// p_n(o, o) for n = 0..nmax without storing full tables.
std::vector<double> return_probabilities(const WeightedGraph& g, VertexId o, std::size_t nmax);

/// max over sampled (x, y) in U x U of
/// |P^U_{n+m}(x, y) - sum_z P^U_n(x, z) P^U_m(z, y)|.
/// Pairs are drawn from a generator seeded with `seed`; when U has at most
/// `samples` pairs, every pair is checked.
double semigroup_check(const WeightedGraph& g, const VertexSet& U, std::size_t n, std::size_t m,
                       std::size_t samples = 20, std::uint64_t seed = 1);

}  // namespace potlab
