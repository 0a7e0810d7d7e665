#include "killed_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "potlab/error.hpp"

namespace potlab::detail {

KilledSystem::KilledSystem(const WeightedGraph& g, const VertexSet& U) : domain_(&U) {
  if (U.universe_size() != g.vertex_count()) {
    throw Error(ErrorKind::InvalidArgument, "vertex set belongs to a different graph");
  }
  if (U.empty()) throw Error(ErrorKind::InvalidArgument, "domain U is empty");
  if (U.size() == g.vertex_count()) {
    throw Error(ErrorKind::SingularSystem,
                "U is the whole host; the killed walk is not strictly substochastic");
  }
  const std::size_t n = U.size();
  mu_.resize(n);
  diag_.resize(n);
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const VertexId x = U[i];
    mu_[i] = g.vertex_weight(x);
    diag_[i] = mu_[i];
    for (const Neighbor& nb : g.neighbors(x)) {
      if (nb.vertex == x) {
        diag_[i] -= nb.weight;
      } else if (U.contains(nb.vertex)) {
        cols_.push_back(U.local_index(nb.vertex));
        weights_.push_back(nb.weight);
      }
    }
    offsets_[i + 1] = cols_.size();
  }
}

void KilledSystem::apply(const std::vector<double>& v, std::vector<double>& out) const {
  const std::size_t n = size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag_[i] * v[i];
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) acc -= weights_[k] * v[cols_[k]];
    out[i] = acc;
  }
}

CgResult KilledSystem::solve(const std::vector<double>& b, std::vector<double>& v, double tol,
                             double scale, std::size_t max_iterations) const {
  const std::size_t n = size();
  if (max_iterations == 0) max_iterations = 20 * n + 1000;
  v.assign(n, 0.0);
  std::vector<double> r = b, z(n), p(n), Ap(n);

  auto defect = [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(r[i]) / mu_[i]);
    return worst;
  };
  const double target = tol * scale;
  CgResult result;
  result.defect = defect();
  if (result.defect <= target) return result;

  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag_[i];
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    apply(p, Ap);
    double pAp = 0.0;
    for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    if (it % 50 == 0) {
      // replace the recursive residual to stop drift
      apply(v, Ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    }
    result.iterations = it;
    result.defect = defect();
    if (result.defect <= target) {
      apply(v, Ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
      result.defect = defect();
      if (result.defect <= target) return result;
    }
    double rz_next = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = r[i] / diag_[i];
      rz_next += r[i] * z[i];
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw Error(ErrorKind::SolverDiverged,
              "conjugate gradient stopped at defect " + std::to_string(result.defect) +
                  " after " + std::to_string(max_iterations) + " iterations");
}

std::vector<double> KilledSystem::dense() const {
  const std::size_t n = size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag_[i];
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) a[i * n + cols_[k]] -= weights_[k];
  }
  return a;
}

}  // namespace potlab::detail
