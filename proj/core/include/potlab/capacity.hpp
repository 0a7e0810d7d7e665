#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "potlab/error.hpp"
#include "potlab/graph.hpp"
#include "potlab/green.hpp"
#include "potlab/walk.hpp"

namespace potlab {

/// C_p(K, U) data: K ⊂ U ⊊ host, p >= 1, q = p / (p - 1).
struct CapacityProblem {
  const WeightedGraph* graph = nullptr;
  VertexSet U;
  VertexSet K;
  double p = 2.0;

  double q() const noexcept { return p / (p - 1.0); }
};

/// Checks the CapacityProblem invariants; throws InvalidArgument.
void validate(const CapacityProblem& problem, bool allow_p_one = false);

enum class Formulation { Dual, Potential, Laplacian, Harmonic, PEnergy };
std::string to_string(Formulation f);

/// Which ordered pairs enter an energy sum.
enum class EnergyRange {
  /// all (x, y) in V x V with zero extension; boundary edges included
  FullGraph,
  /// only x, y in U
  Literal,
};

struct CapacitySolution {
  double value = 0.0;
  /// dual: f on K with nu = f mu and ||G^U f||_q = 1; potential: f on U;
  /// laplacian and p-energy: the minimizing function; harmonic: the
  /// equilibrium potential.
  FunctionTable optimizer;
  Formulation formulation = Formulation::Dual;
  std::size_t iterations = 0;
  /// Upper bound on value - optimum for minimizations (optimum - value for
  /// the dual), from the solver's own certificate. For p-energy this is the
  /// final Newton decrement, an estimate rather than a bound.
  double certified_gap = 0.0;
};

struct CapacityOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100'000;
  SolverOptions green;
};

/// sup nu(K)^p over f >= 0 on K with ||G^U f||_{L^q(U)} <= 1, computed as
/// (min over the simplex of ||G^U f||_q^q)^{-(p-1)}. The Frank-Wolfe gap of
/// the simplex problem certifies the value. p = 2 is solved exactly as a
/// nonnegative quadratic program.
CapacitySolution capacity_dual(const CapacityProblem& problem, const CapacityOptions& options = {});

/// inf ||f||^p_{L^p(U)} over f >= 0 on U with G^U f >= 1 on K, by a
/// log-barrier interior point method (gap m / t).
CapacitySolution capacity_potential(const CapacityProblem& problem,
                                    const CapacityOptions& options = {});

/// inf ||Delta f||^p_{L^p(U)} over f supported in U with f >= 1 on K.
/// p = 2 uses an exact active-set KKT solve; other p use a barrier method.
CapacitySolution capacity_laplacian(const CapacityProblem& problem,
                                    const CapacityOptions& options = {});

struct HarmonicCapacity {
  /// value: sum over ordered pairs of mu_xy (v(x) - v(y))^2; optimizer: v
  CapacitySolution solution;
  /// sigma = -Delta v * mu over the whole host
  FunctionTable equilibrium_measure;
  /// sigma(K), equal to the energy over unordered pairs
  double charge = 0.0;
  /// sum_x |sigma(x)|, equal to the ordered-pair energy
  double total_variation = 0.0;
};

/// Equilibrium potential v (1 on K, 0 off U, harmonic on U \ K) and its energy.
HarmonicCapacity harmonic_capacity(const WeightedGraph& g, const VertexSet& U, const VertexSet& K,
                                   EnergyRange range = EnergyRange::FullGraph,
                                   const SolverOptions& options = {});

/// inf sum_{x,y} mu_xy |f(y) - f(x)|^p over f supported in `support` with
/// f >= 1 on K. The optimum has f = 1 on K, which is fixed; the rest is a
/// damped Newton solve.
CapacitySolution p_energy_capacity(const WeightedGraph& g, const VertexSet& K,
                                   const VertexSet& support, double p,
                                   EnergyRange range = EnergyRange::FullGraph,
                                   const CapacityOptions& options = {});
/// Support B(o, R).
CapacitySolution p_energy_capacity(const WeightedGraph& g, const VertexSet& K, VertexId o,
                                   std::uint32_t R, double p, const CapacityOptions& options = {});

/// Energy of f over the chosen pair range.
double p_energy(const WeightedGraph& g, std::span<const double> f, double p, EnergyRange range,
                const VertexSet* U = nullptr);

struct EquivalenceChecks {
  /// (K1, K2) with K1 ⊂ K2: C_p(K1, U) <= C_p(K2, U)
  std::vector<std::pair<VertexSet, VertexSet>> monotone;
  /// (K1, K2): C_p(K1 ∪ K2, U) <= C_p(K1, U) + C_p(K2, U)
  std::vector<std::pair<VertexSet, VertexSet>> subadditive;
  /// increasing domains containing K: C_p(K, U_i) nonincreasing
  std::vector<VertexSet> domains;
  double relative_tolerance = 1e-3;
  double absolute_tolerance = 1e-6;
  double order_slack = 1e-8;
};

struct OrderCheck {
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct EquivalenceReport {
  CapacitySolution dual;
  CapacitySolution potential;
  CapacitySolution laplacian;
  /// largest pairwise |a - b| and |a - b| / max(a, b) among the three values
  double max_deviation = 0.0;
  double max_relative_deviation = 0.0;
  /// max(absolute_tolerance, relative_tolerance * dual value)
  double tolerance = 0.0;
  bool agree = false;
  std::vector<OrderCheck> order_checks;
  std::vector<double> domain_values;
  bool pass = false;
};

/// Raised by equivalence_report; values() holds (dual, potential, laplacian).
class EquivalenceViolation : public Error {
 public:
  EquivalenceViolation(const std::string& message, std::array<double, 3> values,
                       EquivalenceReport report);
  const std::array<double, 3>& values() const noexcept { return values_; }
  const EquivalenceReport& report() const noexcept { return report_; }

 private:
  std::array<double, 3> values_;
  EquivalenceReport report_;
};

/// Solves all three programs and the requested order checks (via the dual
/// program). Throws EquivalenceViolation unless every check holds.
EquivalenceReport equivalence_report(const CapacityProblem& problem,
                                     const EquivalenceChecks& checks = {},
                                     const CapacityOptions& options = {});

}  // namespace potlab
