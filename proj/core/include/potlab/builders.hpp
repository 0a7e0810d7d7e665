#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

struct BuildLimits {
  std::size_t max_vertices = 4'000'000;
};

/// A finite ball of an infinite graph.
///
/// Vertices at distance < trust_radius from the center carry all of their
/// infinite-graph edges with the right weights; the remaining vertices form
/// the boundary. `profile` holds the infinite-graph ball measures V(o,n) for
/// n <= trust_radius (truncation lowers mu(x) on the boundary layer, so the
/// profile is recorded by the builder rather than re-derived from `graph`).
struct TruncatedGraph {
  std::string name;
  WeightedGraph graph;
  VertexId center = 0;
  std::uint32_t trust_radius = 0;
  VertexSet boundary;
  BallProfile profile;

  bool interior(VertexId x) const noexcept { return !boundary.contains(x); }
};

/// Increasing sequence of balls U_1 ⊂ U_2 ⊂ ... around the center of a
/// truncated host, all strictly inside its trust radius.
struct Exhaustion {
  std::vector<std::uint32_t> radii;
  std::vector<VertexSet> sets;

  std::size_t size() const noexcept { return sets.size(); }
};

/// Z^d with unit edge weights, truncated to the l1 ball of radius R.
TruncatedGraph lattice(int d, std::uint32_t radius, const BuildLimits& limits = {});

/// Symmetry quotient of lattice(d, R) under coordinate permutations and sign
/// flips. Vertices are orbits; mu_{OO'} sums the lattice weights between the
/// two orbits, so the walk on the quotient is the lumped lattice walk and
/// p_n(o, o) at the (singleton) origin orbit equals the lattice value.
TruncatedGraph lattice_quotient(int d, std::uint32_t radius, const BuildLimits& limits = {});

/// |B(0, n)| for the l1 ball in Z^d: sum_k 2^k C(d,k) C(n,k).
double lattice_ball_count(int d, std::uint64_t n);
double lattice_sphere_count(int d, std::uint64_t n);

/// Closed-form profile of unit-weight Z^d (mu = 2d) for radii 0..nmax.
BallProfile lattice_profile(int d, std::uint64_t nmax);
/// Closed-form profile of the hat graph of Z^d: V^(o, n) = V(o, 2n).
BallProfile hat_lattice_profile(int d, std::uint64_t nmax);

// --- Cayley graphs ---------------------------------------------------------

/// Group elements are fixed-size integer tuples; unused slots stay zero.
using GroupElement = std::array<std::int64_t, 4>;

struct GroupLaw {
  std::string name;
  GroupElement identity{};
  /// Must be associative; may throw Error(SizeLimit) on integer overflow.
  std::function<GroupElement(const GroupElement&, const GroupElement&)> multiply;
};

/// Ball of radius R around the identity in the Cayley graph of (law, S):
/// x ~ y iff x^{-1} y ∈ S, mu_xy = 1/|S|, so mu(x) = 1 in the interior.
/// A generator equal to the identity puts a loop on every vertex.
TruncatedGraph cayley_ball(const GroupLaw& law, const std::vector<GroupElement>& generators,
                           std::uint32_t radius, const BuildLimits& limits = {});

/// Z^d as an additive group law.
GroupLaw integer_lattice_law(int d);
std::vector<GroupElement> unit_steps(int d);

/// Discrete Heisenberg group: (a, b, c) encodes [[1, b, c], [0, 1, a], [0, 0, 1]].
GroupLaw heisenberg_law();
/// Standard generators a^{±1} = (±1, 0, 0) and b^{±1} = (0, ±1, 0).
std::vector<GroupElement> heisenberg_generators();
TruncatedGraph heisenberg(std::uint32_t radius, const BuildLimits& limits = {});

/// Balls of the given radii around the center. Radii must be strictly
/// increasing (NotIncreasing) and below the trust radius (RadiusExceedsTrust).
Exhaustion exhaustion_of(const TruncatedGraph& t, const std::vector<std::uint32_t>& radii);

}  // namespace potlab
