#include "potlab/capacity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "killed_system.hpp"
#include "potlab/parallel.hpp"

namespace potlab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Green columns g^U(., k) for k in K, in U-local coordinates.
struct GreenData {
  MatrixXd gamma;  // |U| x |K|
  VectorXd mu;     // mu on U
  std::vector<std::size_t> k_local;
};

GreenData green_data(const CapacityProblem& problem, const SolverOptions& options) {
  const WeightedGraph& g = *problem.graph;
  const detail::KilledSystem system(g, problem.U);
  GreenData data;
  const std::size_t n = problem.U.size();
  const std::size_t m = problem.K.size();
  data.gamma.resize(n, m);
  data.mu = Eigen::Map<const VectorXd>(system.mu().data(), n);
  for (VertexId k : problem.K) data.k_local.push_back(problem.U.local_index(k));
  std::vector<std::vector<double>> columns(m);
  parallel_for(m, [&](std::size_t j) {
    std::vector<double> b(n, 0.0);
    b[data.k_local[j]] = 1.0;
    system.solve(b, columns[j], options.tolerance, 1.0 / data.mu[data.k_local[j]],
                 options.max_iterations);
  });
  for (std::size_t j = 0; j < m; ++j) {
    data.gamma.col(j) = Eigen::Map<const VectorXd>(columns[j].data(), n);
  }
  return data;
}

FunctionTable extend(const VertexSet& U, std::size_t universe, const VectorXd& local) {
  FunctionTable out(universe, 0.0);
  for (std::size_t i = 0; i < U.size(); ++i) out[U[i]] = local[i];
  return out;
}

// Euclidean projection onto {x >= 0, sum x = 1}.
VectorXd project_simplex(const VectorXd& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

struct DualObjective {
  const MatrixXd& gamma;
  const VectorXd& mu;
  double q;

  double value(const VectorXd& nu) const {
    const VectorXd h = gamma * nu;
    return (mu.array() * h.array().abs().pow(q)).sum();
  }
  VectorXd gradient(const VectorXd& nu) const {
    const VectorXd h = gamma * nu;
    const VectorXd w = (q * mu.array() * h.array().abs().pow(q - 1.0) * h.array().sign()).matrix();
    return gamma.transpose() * w;
  }
};

double frank_wolfe_gap(const VectorXd& grad, const VectorXd& nu) {
  return std::max(0.0, grad.dot(nu) - grad.minCoeff());
}

// min 1/2 x'Qx - 1'x over x >= 0 for positive definite Q (Lawson-Hanson).
VectorXd nonnegative_qp(const MatrixXd& Q, std::size_t& iterations) {
  const Eigen::Index m = Q.rows();
  VectorXd x = VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  const double tol = 1e-14 * std::max(1.0, Q.diagonal().maxCoeff());
  for (iterations = 0; iterations < static_cast<std::size_t>(10 * m + 10); ++iterations) {
    const VectorXd w = VectorXd::Ones(m) - Q * x;
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[j] && w[j] > tol && (best < 0 || w[j] > w[best])) best = j;
    }
    if (best < 0) break;
    passive[best] = true;
    while (true) {
      std::vector<Eigen::Index> P;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j]) P.push_back(j);
      }
      MatrixXd QP(P.size(), P.size());
      for (std::size_t a = 0; a < P.size(); ++a) {
        for (std::size_t b = 0; b < P.size(); ++b) QP(a, b) = Q(P[a], P[b]);
      }
      const VectorXd zP = QP.llt().solve(VectorXd::Ones(P.size()));
      if (zP.minCoeff() > 0.0) {
        x.setZero();
        for (std::size_t a = 0; a < P.size(); ++a) x[P[a]] = zP[a];
        break;
      }
      double alpha = 1.0;
      for (std::size_t a = 0; a < P.size(); ++a) {
        if (zP[a] <= 0.0) alpha = std::min(alpha, x[P[a]] / (x[P[a]] - zP[a]));
      }
      VectorXd z = VectorXd::Zero(m);
      for (std::size_t a = 0; a < P.size(); ++a) z[P[a]] = zP[a];
      x += alpha * (z - x);
      for (std::size_t a = 0; a < P.size(); ++a) {
        if (x[P[a]] <= tol) {
          x[P[a]] = 0.0;
          passive[P[a]] = false;
        }
      }
    }
  }
  return x;
}

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidArgument, "this formulation needs 1 < p < infinity");
  }
}

// Backtracking line search helper: largest step in {1, 1/2, ...} keeping
// `feasible` true and giving Armijo decrease of `phi`.
template <typename Feasible, typename Phi>
double line_search(double phi0, double slope, Feasible feasible, Phi phi) {
  double step = 1.0;
  for (int i = 0; i < 80; ++i, step *= 0.5) {
    if (!feasible(step)) continue;
    if (phi(step) <= phi0 + 0.25 * step * slope) return step;
  }
  return 0.0;
}

}  // namespace

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::Dual: return "dual";
    case Formulation::Potential: return "potential";
    case Formulation::Laplacian: return "laplacian";
    case Formulation::Harmonic: return "harmonic";
    case Formulation::PEnergy: return "p-energy";
  }
  return "unknown";
}

void validate(const CapacityProblem& problem, bool allow_p_one) {
  if (problem.graph == nullptr) throw Error(ErrorKind::InvalidArgument, "problem has no graph");
  const std::size_t n = problem.graph->vertex_count();
  if (problem.U.universe_size() != n || problem.K.universe_size() != n) {
    throw Error(ErrorKind::InvalidArgument, "vertex sets belong to a different graph");
  }
  if (problem.K.empty()) throw Error(ErrorKind::InvalidArgument, "K is empty");
  if (!problem.K.is_subset_of(problem.U)) {
    throw Error(ErrorKind::InvalidArgument, "K is not contained in U");
  }
  if (problem.U.size() == n) {
    throw Error(ErrorKind::SingularSystem, "U is the whole host; local Green function undefined");
  }
  if (!std::isfinite(problem.p) || problem.p < 1.0 || (!allow_p_one && problem.p == 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p must satisfy 1 < p < infinity");
  }
}

CapacitySolution capacity_dual(const CapacityProblem& problem, const CapacityOptions& options) {
  validate(problem);
  const double p = problem.p;
  const double q = problem.q();
  const GreenData data = green_data(problem, options.green);
  const Eigen::Index m = data.gamma.cols();
  const DualObjective F{data.gamma, data.mu, q};

  CapacitySolution sol;
  sol.formulation = Formulation::Dual;
  VectorXd nu = VectorXd::Constant(m, 1.0 / static_cast<double>(m));

  if (m == 1) {
    sol.iterations = 0;
  } else if (p == 2.0) {
    const MatrixXd Q = data.gamma.transpose() * data.mu.asDiagonal() * data.gamma;
    const VectorXd x = nonnegative_qp(Q, sol.iterations);
    nu = x / x.sum();
  } else {
    // accelerated projected gradient with backtracking and adaptive restart
    VectorXd prev = nu, y = nu;
    double L = 1.0;
    double t = 1.0;
    double f_nu = F.value(nu);
    for (sol.iterations = 1; sol.iterations <= options.max_iterations; ++sol.iterations) {
      const VectorXd gy = F.gradient(y);
      const double fy = F.value(y);
      VectorXd next;
      double f_next = 0.0;
      for (int bt = 0; bt < 60; ++bt) {
        next = project_simplex(y - gy / L);
        f_next = F.value(next);
        const VectorXd d = next - y;
        if (f_next <= fy + gy.dot(d) + 0.5 * L * d.squaredNorm() + 1e-15 * std::abs(fy)) break;
        L *= 2.0;
      }
      if (f_next > f_nu) {
        // restart momentum
        y = nu;
        t = 1.0;
        continue;
      }
      prev = nu;
      nu = next;
      f_nu = f_next;
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = nu + ((t - 1.0) / t_next) * (nu - prev);
      t = t_next;
      L *= 0.9;
      if (frank_wolfe_gap(F.gradient(nu), nu) <= options.tolerance * f_nu) break;
    }
    if (frank_wolfe_gap(F.gradient(nu), nu) > 1e3 * options.tolerance * f_nu) {
      throw Error(ErrorKind::SolverDiverged, "dual capacity program did not reach its gap target");
    }
  }

  const double f_nu = F.value(nu);
  const double gap = frank_wolfe_gap(F.gradient(nu), nu);
  sol.value = std::pow(f_nu, -(p - 1.0));
  const double lower = f_nu - gap;
  sol.certified_gap =
      lower > 0.0 ? std::pow(lower, -(p - 1.0)) - sol.value : std::numeric_limits<double>::infinity();

  // scale so that ||G^U f||_q = 1, then f = nu / mu on K
  const VectorXd scaled = nu / std::pow(f_nu, 1.0 / q);
  sol.optimizer.assign(problem.graph->vertex_count(), 0.0);
  for (Eigen::Index j = 0; j < m; ++j) {
    sol.optimizer[problem.K[j]] = scaled[j] / data.mu[data.k_local[j]];
  }
  return sol;
}

CapacitySolution capacity_potential(const CapacityProblem& problem,
                                    const CapacityOptions& options) {
  validate(problem);
  const double p = problem.p;
  const GreenData data = green_data(problem, options.green);
  const Eigen::Index n = data.gamma.rows();
  const Eigen::Index m = data.gamma.cols();
  // constraint j: (B' f)_j >= 1 with B = diag(mu) Gamma
  const MatrixXd B = data.mu.asDiagonal() * data.gamma;
  const VectorXd& mu = data.mu;

  auto objective = [&](const VectorXd& f) { return (mu.array() * f.array().pow(p)).sum(); };
  VectorXd f = VectorXd::Ones(n);
  f *= 2.0 / (B.transpose() * f).minCoeff();

  const double constraints = static_cast<double>(n + m);
  double t = constraints / objective(f);
  CapacitySolution sol;
  sol.formulation = Formulation::Potential;
  auto barrier = [&](const VectorXd& x) {
    const VectorXd c = (B.transpose() * x).array() - 1.0;
    return t * objective(x) - c.array().log().sum() - x.array().log().sum();
  };

  for (int outer = 0; outer < 60; ++outer) {
    for (int newton = 0; newton < 200; ++newton) {
      ++sol.iterations;
      const VectorXd c = (B.transpose() * f).array() - 1.0;
      const VectorXd inv_c = c.cwiseInverse();
      const VectorXd grad = (t * p * mu.array() * f.array().pow(p - 1.0) - f.array().inverse())
                                .matrix() -
                            B * inv_c;
      const VectorXd D = (t * p * (p - 1.0) * mu.array() * f.array().pow(p - 2.0) +
                          f.array().square().inverse())
                             .matrix();
      // (D + B diag(1/c^2) B')^{-1} by the Woodbury identity
      const MatrixXd DinvB = D.cwiseInverse().asDiagonal() * B;
      MatrixXd small = B.transpose() * DinvB;
      small.diagonal() += c.array().square().matrix();
      const VectorXd Dinv_g = grad.cwiseQuotient(D);
      const VectorXd step = -(Dinv_g - DinvB * small.ldlt().solve(B.transpose() * Dinv_g));
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 <= 1e-12) break;
      const double phi0 = barrier(f);
      const double s = line_search(
          phi0, -decrement,
          [&](double a) {
            const VectorXd x = f + a * step;
            return x.minCoeff() > 0.0 && ((B.transpose() * x).array() - 1.0).minCoeff() > 0.0;
          },
          [&](double a) { return barrier(f + a * step); });
      if (s == 0.0) break;
      f += s * step;
    }
    const double value = objective(f);
    if (constraints / t <= options.tolerance * value) break;
    t *= 10.0;
  }
  sol.value = objective(f);
  sol.certified_gap = constraints / t;
  if (sol.certified_gap > 1e3 * options.tolerance * sol.value) {
    throw Error(ErrorKind::SolverDiverged, "potential program did not reach its gap target");
  }
  sol.optimizer = extend(problem.U, problem.graph->vertex_count(), f);
  return sol;
}

CapacitySolution capacity_laplacian(const CapacityProblem& problem,
                                    const CapacityOptions& options) {
  validate(problem);
  const double p = problem.p;
  const WeightedGraph& g = *problem.graph;
  const detail::KilledSystem system(g, problem.U);
  const Eigen::Index n = static_cast<Eigen::Index>(problem.U.size());
  const std::vector<double> dense = system.dense();
  const MatrixXd A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>(dense.data(), n, n);
  const VectorXd mu = Eigen::Map<const VectorXd>(system.mu().data(), n);
  std::vector<Eigen::Index> k_local;
  for (VertexId k : problem.K) k_local.push_back(problem.U.local_index(k));

  // -Delta f on U equals (A f) / mu
  auto residual = [&](const VectorXd& f) -> VectorXd { return (A * f).cwiseQuotient(mu); };
  auto objective = [&](const VectorXd& f) {
    return (mu.array() * residual(f).array().abs().pow(p)).sum();
  };

  CapacitySolution sol;
  sol.formulation = Formulation::Laplacian;
  VectorXd f;

  if (p == 2.0) {
    // primal active set on the lower bounds f_k >= 1
    const MatrixXd H = A.transpose() * mu.cwiseInverse().asDiagonal() * A;
    std::vector<bool> active(n, false);
    std::vector<bool> bounded(n, false);
    for (auto k : k_local) active[k] = bounded[k] = true;
    f = VectorXd::Zero(n);
    for (auto k : k_local) f[k] = 1.0;
    auto solve_eq = [&] {
      std::vector<Eigen::Index> freev;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!active[i]) freev.push_back(i);
      }
      VectorXd out = VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (active[i]) out[i] = 1.0;
      }
      if (freev.empty()) return out;
      MatrixXd HF(freev.size(), freev.size());
      VectorXd rhs(freev.size());
      for (std::size_t a = 0; a < freev.size(); ++a) {
        rhs[a] = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (active[j]) rhs[a] -= H(freev[a], j);
        }
        for (std::size_t b = 0; b < freev.size(); ++b) HF(a, b) = H(freev[a], freev[b]);
      }
      const VectorXd z = HF.llt().solve(rhs);
      for (std::size_t a = 0; a < freev.size(); ++a) out[freev[a]] = z[a];
      return out;
    };
    for (sol.iterations = 1; sol.iterations <= 10 * k_local.size() + 10; ++sol.iterations) {
      const VectorXd target = solve_eq();
      double alpha = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (bounded[i] && !active[i] && target[i] < 1.0 && f[i] > target[i]) {
          const double a = (f[i] - 1.0) / (f[i] - target[i]);
          if (a < alpha) {
            alpha = a;
            blocking = i;
          }
        }
      }
      f += alpha * (target - f);
      if (blocking >= 0) {
        active[blocking] = true;
        f[blocking] = 1.0;
        continue;
      }
      const VectorXd grad = H * f;
      Eigen::Index worst = -1;
      for (auto k : k_local) {
        if (active[k] && grad[k] < -1e-13 && (worst < 0 || grad[k] < grad[worst])) worst = k;
      }
      if (worst < 0) break;
      active[worst] = false;
    }
    const VectorXd grad = 2.0 * H * f;
    double complementarity = 0.0;
    for (auto k : k_local) complementarity += std::abs(grad[k] * (f[k] - 1.0));
    sol.certified_gap = complementarity;
  } else {
    // barrier method on f_k > 1 with dense Newton steps
    f = VectorXd::Zero(n);
    {
      std::vector<double> b(system.mu()), v;
      system.solve(b, v, options.green.tolerance, 1.0, options.green.max_iterations);
      f = Eigen::Map<const VectorXd>(v.data(), n);
      double lo = std::numeric_limits<double>::infinity();
      for (auto k : k_local) lo = std::min(lo, f[k]);
      f *= 2.0 / lo;
    }
    const double constraints = static_cast<double>(k_local.size());
    double t = constraints / objective(f);
    auto slack = [&](const VectorXd& x) {
      double lo = std::numeric_limits<double>::infinity();
      for (auto k : k_local) lo = std::min(lo, x[k] - 1.0);
      return lo;
    };
    auto barrier = [&](const VectorXd& x) {
      double b = t * objective(x);
      for (auto k : k_local) b -= std::log(x[k] - 1.0);
      return b;
    };
    const double eps = 1e-12;
    for (int outer = 0; outer < 60; ++outer) {
      for (int newton = 0; newton < 200; ++newton) {
        ++sol.iterations;
        const VectorXd r = residual(f);
        const VectorXd w = (p * r.array().abs().pow(p - 1.0) * r.array().sign()).matrix();
        VectorXd grad = t * (A.transpose() * w);
        const VectorXd curv =
            (p * (p - 1.0) * (r.array().square() + eps * eps).pow(0.5 * (p - 2.0)) / mu.array())
                .matrix();
        MatrixXd H = t * (A.transpose() * curv.asDiagonal() * A);
        for (auto k : k_local) {
          grad[k] -= 1.0 / (f[k] - 1.0);
          H(k, k) += 1.0 / ((f[k] - 1.0) * (f[k] - 1.0));
        }
        Eigen::LDLT<MatrixXd> ldlt(H);
        VectorXd step = -ldlt.solve(grad);
        double decrement = -grad.dot(step);
        if (!(decrement >= 0.0) || !step.allFinite()) {
          step = -grad;
          decrement = grad.squaredNorm();
        }
        if (decrement / 2.0 <= 1e-12) break;
        const double phi0 = barrier(f);
        const double s = line_search(
            phi0, -decrement, [&](double a) { return slack(f + a * step) > 0.0; },
            [&](double a) { return barrier(f + a * step); });
        if (s == 0.0) break;
        f += s * step;
      }
      if (constraints / t <= options.tolerance * objective(f)) break;
      t *= 10.0;
    }
    sol.certified_gap = constraints / t;
    if (sol.certified_gap > 1e3 * options.tolerance * objective(f)) {
      throw Error(ErrorKind::SolverDiverged, "laplacian program did not reach its gap target");
    }
  }
  sol.value = objective(f);
  sol.optimizer = extend(problem.U, g.vertex_count(), f);
  return sol;
}

double p_energy(const WeightedGraph& g, std::span<const double> f, double p, EnergyRange range,
                const VertexSet* U) {
  if (range == EnergyRange::Literal && U == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "literal energy range needs the set U");
  }
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (e.u == e.v) continue;
    if (range == EnergyRange::Literal && !(U->contains(e.u) && U->contains(e.v))) continue;
    total += 2.0 * e.weight * std::pow(std::abs(f[e.u] - f[e.v]), p);
  }
  return total;
}

HarmonicCapacity harmonic_capacity(const WeightedGraph& g, const VertexSet& U, const VertexSet& K,
                                   EnergyRange range, const SolverOptions& options) {
  CapacityProblem problem{&g, U, K, 1.0};
  validate(problem, true);
  FunctionTable v(g.vertex_count(), 0.0);
  for (VertexId x : U) v[x] = 1.0;
  std::vector<VertexId> rest;
  for (VertexId x : U) {
    if (!K.contains(x)) rest.push_back(x);
  }
  HarmonicCapacity out;
  if (!rest.empty()) {
    const VertexSet W(g.vertex_count(), rest);
    const detail::KilledSystem system(g, W);
    std::vector<double> b(W.size(), 0.0);
    for (std::size_t i = 0; i < W.size(); ++i) {
      for (const Neighbor& nb : g.neighbors(W[i])) {
        if (K.contains(nb.vertex)) b[i] += nb.weight;
      }
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < W.size(); ++i) scale = std::max(scale, b[i] / system.mu()[i]);
    std::vector<double> local;
    const auto result = system.solve(b, local, options.tolerance, std::max(scale, 1e-300),
                                     options.max_iterations);
    out.solution.iterations = result.iterations;
    for (std::size_t i = 0; i < W.size(); ++i) v[W[i]] = local[i];
  }
  out.equilibrium_measure.assign(g.vertex_count(), 0.0);
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    double s = g.vertex_weight(x) * v[x];
    for (const Neighbor& nb : g.neighbors(x)) s -= nb.weight * v[nb.vertex];
    out.equilibrium_measure[x] = s;
    out.total_variation += std::abs(s);
    if (K.contains(x)) out.charge += s;
  }
  out.solution.formulation = Formulation::Harmonic;
  out.solution.value = p_energy(g, v, 2.0, range, &U);
  out.solution.optimizer = std::move(v);
  return out;
}

CapacitySolution p_energy_capacity(const WeightedGraph& g, const VertexSet& K,
                                   const VertexSet& support, double p, EnergyRange range,
                                   const CapacityOptions& options) {
  require_p(p);
  CapacityProblem problem{&g, support, K, p};
  validate(problem);

  // start from the equilibrium potential of (K, support); under the literal
  // range the constant 1 on the support already has zero energy
  FunctionTable f;
  if (range == EnergyRange::Literal) {
    f.assign(g.vertex_count(), 0.0);
    for (VertexId x : support) f[x] = 1.0;
  } else {
    f = harmonic_capacity(g, support, K, range, options.green).solution.optimizer;
  }

  std::vector<VertexId> free_list;
  for (VertexId x : support) {
    if (!K.contains(x)) free_list.push_back(x);
  }
  const VertexSet W(g.vertex_count(), free_list);
  CapacitySolution sol;
  sol.formulation = Formulation::PEnergy;
  auto energy = [&](const FunctionTable& h) { return p_energy(g, h, p, range, &support); };

  if (p != 2.0 && !W.empty()) {
    const Eigen::Index n = static_cast<Eigen::Index>(W.size());
    const double eps = 1e-9;
    for (sol.iterations = 1; sol.iterations <= 500; ++sol.iterations) {
      VectorXd grad = VectorXd::Zero(n);
      std::vector<Eigen::Triplet<double>> triplets;
      for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        if (range == EnergyRange::Literal && !(support.contains(e.u) && support.contains(e.v))) {
          continue;
        }
        const bool fu = W.contains(e.u), fv = W.contains(e.v);
        if (!fu && !fv) continue;
        const double d = f[e.u] - f[e.v];
        const double gcoef = 2.0 * e.weight * p * std::pow(std::abs(d), p - 1.0) * (d > 0 ? 1 : -1);
        const double hcoef =
            2.0 * e.weight * p * (p - 1.0) * std::pow(d * d + eps * eps, 0.5 * (p - 2.0));
        const auto iu = static_cast<Eigen::Index>(W.local_index(e.u));
        const auto iv = static_cast<Eigen::Index>(W.local_index(e.v));
        if (fu) {
          grad[iu] += gcoef;
          triplets.emplace_back(iu, iu, hcoef);
        }
        if (fv) {
          grad[iv] -= gcoef;
          triplets.emplace_back(iv, iv, hcoef);
        }
        if (fu && fv) {
          triplets.emplace_back(iu, iv, -hcoef);
          triplets.emplace_back(iv, iu, -hcoef);
        }
      }
      Eigen::SparseMatrix<double> H(n, n);
      H.setFromTriplets(triplets.begin(), triplets.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
      VectorXd step = ldlt.info() == Eigen::Success ? VectorXd(-ldlt.solve(grad)) : VectorXd(-grad);
      double decrement = -grad.dot(step);
      if (!(decrement > 0.0) || !step.allFinite()) {
        step = -grad;
        decrement = grad.squaredNorm();
      }
      const double e0 = energy(f);
      sol.certified_gap = decrement / 2.0;
      if (sol.certified_gap <= options.tolerance * std::max(e0, 1e-300)) break;
      auto moved = [&](double a) {
        FunctionTable h = f;
        for (Eigen::Index i = 0; i < n; ++i) h[W[i]] += a * step[i];
        return h;
      };
      const double s = line_search(
          e0, -decrement, [](double) { return true; }, [&](double a) { return energy(moved(a)); });
      if (s == 0.0) break;
      f = moved(s);
    }
  }
  sol.value = energy(f);
  sol.optimizer = std::move(f);
  return sol;
}

CapacitySolution p_energy_capacity(const WeightedGraph& g, const VertexSet& K, VertexId o,
                                   std::uint32_t R, double p, const CapacityOptions& options) {
  return p_energy_capacity(g, K, ball(g, o, R), p, EnergyRange::FullGraph, options);
}

EquivalenceViolation::EquivalenceViolation(const std::string& message,
                                           std::array<double, 3> values, EquivalenceReport report)
    : Error(ErrorKind::EquivalenceViolation, message),
      values_(values),
      report_(std::move(report)) {}

EquivalenceReport equivalence_report(const CapacityProblem& problem,
                                     const EquivalenceChecks& checks,
                                     const CapacityOptions& options) {
  EquivalenceReport report;
  report.dual = capacity_dual(problem, options);
  report.potential = capacity_potential(problem, options);
  report.laplacian = capacity_laplacian(problem, options);
  const std::array<double, 3> values{report.dual.value, report.potential.value,
                                     report.laplacian.value};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double diff = std::abs(values[i] - values[j]);
      report.max_deviation = std::max(report.max_deviation, diff);
      report.max_relative_deviation =
          std::max(report.max_relative_deviation, diff / std::max(values[i], values[j]));
    }
  }
  report.tolerance = std::max(checks.absolute_tolerance, checks.relative_tolerance * values[0]);
  report.agree = report.max_deviation <= report.tolerance;

  auto dual_value = [&](const VertexSet& K, const VertexSet& U) {
    CapacityProblem sub{problem.graph, U, K, problem.p};
    return capacity_dual(sub, options).value;
  };
  for (const auto& [K1, K2] : checks.monotone) {
    const double a = dual_value(K1, problem.U), b = dual_value(K2, problem.U);
    report.order_checks.push_back({"monotone-K", a, b, a <= b + checks.order_slack});
  }
  for (const auto& [K1, K2] : checks.subadditive) {
    std::vector<VertexId> joined(K1.begin(), K1.end());
    joined.insert(joined.end(), K2.begin(), K2.end());
    const VertexSet both(K1.universe_size(), joined);
    const double a = dual_value(both, problem.U);
    const double b = dual_value(K1, problem.U) + dual_value(K2, problem.U);
    report.order_checks.push_back({"subadditive", a, b, a <= b + checks.order_slack});
  }
  for (std::size_t i = 0; i < checks.domains.size(); ++i) {
    report.domain_values.push_back(dual_value(problem.K, checks.domains[i]));
    if (i > 0) {
      const double prev = report.domain_values[i - 1], cur = report.domain_values[i];
      report.order_checks.push_back({"monotone-U", cur, prev, cur <= prev + checks.order_slack});
    }
  }

  report.pass = report.agree && std::all_of(report.order_checks.begin(), report.order_checks.end(),
                                            [](const OrderCheck& c) { return c.holds; });
  if (!report.pass) {
    std::string message = "capacity checks failed: dual " + std::to_string(values[0]) +
                          ", potential " + std::to_string(values[1]) + ", laplacian " +
                          std::to_string(values[2]);
    throw EquivalenceViolation(message, values, std::move(report));
  }
  return report;
}

}  // namespace potlab
