#pragma once

// Local-index form of the Dirichlet operator (I_U - P^U) scaled by mu:
//   (A v)_x = (mu(x) - mu_xx) v_x - sum_{y in U, y != x} mu_xy v_y,  x in U.
// A is symmetric, and positive definite whenever U misses a vertex of a
// connected host.

#include <cstddef>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab::detail {

struct CgResult {
  std::size_t iterations = 0;
  double defect = 0.0;  // max |b_x - (A v)_x| / mu(x)
};

class KilledSystem {
 public:
  KilledSystem(const WeightedGraph& g, const VertexSet& U);

  std::size_t size() const noexcept { return mu_.size(); }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const VertexSet& domain() const noexcept { return *domain_; }

  void apply(const std::vector<double>& v, std::vector<double>& out) const;

  /// Solves A v = b by Jacobi-preconditioned CG from v = 0, stopping when
  /// max_x |b_x - (Av)_x| / mu(x) <= tol * scale. Throws SolverDiverged when
  /// the iteration cap is reached first.
  CgResult solve(const std::vector<double>& b, std::vector<double>& v, double tol, double scale,
                 std::size_t max_iterations = 0) const;

  /// Dense copy of A (row-major), for small direct solves.
  std::vector<double> dense() const;

 private:
  const VertexSet* domain_;
  std::vector<double> mu_;
  std::vector<double> diag_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> cols_;
  std::vector<double> weights_;
};

}  // namespace potlab::detail
