#include "potlab/builders.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "potlab/error.hpp"

namespace potlab {

namespace {

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t c : g) {
      std::uint64_t z = static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      h ^= z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};

void check_dimension(int d) {
  if (d < 1 || d > 4) {
    throw Error(ErrorKind::InvalidArgument,
                "dimension must be in [1, 4] for explicit hosts, got " + std::to_string(d));
  }
}

void check_radius(std::uint32_t radius) {
  if (radius < 1) throw Error(ErrorKind::InvalidArgument, "radius must be at least 1");
}

void check_size(double count, const BuildLimits& limits, const std::string& what) {
  if (count > static_cast<double>(limits.max_vertices)) {
    throw Error(ErrorKind::SizeLimit, what + " would have " + std::to_string(count) +
                                          " vertices, cap is " +
                                          std::to_string(limits.max_vertices));
  }
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return value < 9e15 ? std::round(value) : value;
}

// Boundary set and layer profile from BFS layers; `full_weight(x)` is the
// vertex weight x has in the infinite graph.
template <typename FullWeight>
void finish_truncation(TruncatedGraph& t, const std::vector<std::uint32_t>& layer,
                       FullWeight full_weight) {
  const std::uint32_t R = t.trust_radius;
  std::vector<VertexId> boundary;
  BallProfile profile;
  profile.center = t.center;
  profile.sphere_count.assign(R + 1, 0.0);
  profile.sphere_measure.assign(R + 1, 0.0);
  for (std::size_t x = 0; x < layer.size(); ++x) {
    if (layer[x] >= R) boundary.push_back(static_cast<VertexId>(x));
    profile.sphere_count[layer[x]] += 1.0;
    profile.sphere_measure[layer[x]] += full_weight(static_cast<VertexId>(x));
  }
  profile.ball_measure.resize(R + 1);
  double running = 0.0;
  for (std::uint32_t n = 0; n <= R; ++n) {
    running += profile.sphere_measure[n];
    profile.ball_measure[n] = running;
  }
  t.boundary = VertexSet(layer.size(), std::move(boundary));
  t.profile = std::move(profile);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorKind::SizeLimit, "group element coordinate overflow");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorKind::SizeLimit, "group element coordinate overflow");
  }
  return out;
}

}  // namespace

double lattice_ball_count(int d, std::uint64_t n) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  double total = 0.0;
  const auto du = static_cast<std::uint64_t>(d);
  for (std::uint64_t k = 0; k <= std::min(du, n); ++k) {
    total += std::ldexp(binomial(du, k) * binomial(n, k), static_cast<int>(k));
  }
  return total;
}

double lattice_sphere_count(int d, std::uint64_t n) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (n == 0) return 1.0;
  // points with exactly k nonzero coordinates summing to n in absolute value
  double total = 0.0;
  const auto du = static_cast<std::uint64_t>(d);
  for (std::uint64_t k = 1; k <= std::min(du, n); ++k) {
    total += std::ldexp(binomial(du, k) * binomial(n - 1, k - 1), static_cast<int>(k));
  }
  return total;
}

BallProfile lattice_profile(int d, std::uint64_t nmax) {
  BallProfile profile;
  profile.sphere_count.resize(nmax + 1);
  profile.sphere_measure.resize(nmax + 1);
  profile.ball_measure.resize(nmax + 1);
  double running = 0.0;
  for (std::uint64_t n = 0; n <= nmax; ++n) {
    profile.sphere_count[n] = lattice_sphere_count(d, n);
    profile.sphere_measure[n] = 2.0 * d * profile.sphere_count[n];
    running += profile.sphere_measure[n];
    profile.ball_measure[n] = running;
  }
  return profile;
}

BallProfile hat_lattice_profile(int d, std::uint64_t nmax) {
  BallProfile profile;
  profile.sphere_count.resize(nmax + 1);
  profile.sphere_measure.resize(nmax + 1);
  profile.ball_measure.resize(nmax + 1);
  double prev_count = 0.0;
  double prev_measure = 0.0;
  for (std::uint64_t n = 0; n <= nmax; ++n) {
    const double count = lattice_ball_count(d, 2 * n);
    profile.ball_measure[n] = 2.0 * d * count;
    profile.sphere_count[n] = count - prev_count;
    profile.sphere_measure[n] = profile.ball_measure[n] - prev_measure;
    prev_count = count;
    prev_measure = profile.ball_measure[n];
  }
  return profile;
}

TruncatedGraph lattice(int d, std::uint32_t radius, const BuildLimits& limits) {
  check_dimension(d);
  check_radius(radius);
  check_size(lattice_ball_count(d, radius), limits, "lattice ball");

  const std::int64_t R = radius;
  const std::int64_t base = 2 * R + 1;
  auto encode = [&](const GroupElement& p) {
    std::int64_t key = 0;
    for (int k = 0; k < d; ++k) key = key * base + (p[k] + R);
    return key;
  };

  std::unordered_map<std::int64_t, VertexId> index;
  std::vector<GroupElement> points{GroupElement{}};
  std::vector<std::uint32_t> layer{0};
  index.emplace(encode(points[0]), 0);
  std::vector<Edge> edges;
  for (std::size_t head = 0; head < points.size(); ++head) {
    const GroupElement x = points[head];
    for (int k = 0; k < d; ++k) {
      for (int sign : {1, -1}) {
        GroupElement y = x;
        y[k] += sign;
        std::int64_t norm = 0;
        for (int j = 0; j < d; ++j) norm += std::abs(y[j]);
        if (norm > R) continue;
        const auto [it, inserted] = index.emplace(encode(y), static_cast<VertexId>(points.size()));
        if (inserted) {
          points.push_back(y);
          layer.push_back(static_cast<std::uint32_t>(norm));
        }
        if (head < it->second) edges.push_back({static_cast<VertexId>(head), it->second, 1.0});
      }
    }
  }

  TruncatedGraph t;
  t.name = "Z^" + std::to_string(d);
  t.graph = build_graph(edges);
  t.center = 0;
  t.trust_radius = radius;
  finish_truncation(t, layer, [d](VertexId) { return 2.0 * d; });
  return t;
}

TruncatedGraph lattice_quotient(int d, std::uint32_t radius, const BuildLimits& limits) {
  if (d < 1 || d > 10) {
    throw Error(ErrorKind::InvalidArgument, "quotient dimension must be in [1, 10]");
  }
  check_radius(radius);

  using Orbit = std::vector<std::int64_t>;  // nonincreasing, nonnegative
  const std::int64_t base = static_cast<std::int64_t>(radius) + 1;
  if (d * std::log2(static_cast<double>(base)) > 62.0) {
    throw Error(ErrorKind::SizeLimit, "quotient orbit keys would overflow 64 bits");
  }
  auto encode = [&](const Orbit& o) {
    std::int64_t key = 0;
    for (std::int64_t c : o) key = key * base + c;
    return key;
  };
  double factorial_d = 1.0;
  for (int k = 2; k <= d; ++k) factorial_d *= k;
  auto orbit_size = [&](const Orbit& o) {
    double size = factorial_d;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= o.size(); ++i) {
      if (i < o.size() && o[i] == o[i - 1]) {
        ++run;
      } else {
        for (std::size_t j = 2; j <= run; ++j) size /= static_cast<double>(j);
        run = 1;
      }
    }
    for (std::int64_t c : o) {
      if (c != 0) size *= 2.0;
    }
    return size;
  };

  std::unordered_map<std::int64_t, VertexId> index;
  std::vector<Orbit> orbits{Orbit(d, 0)};
  std::vector<std::uint32_t> layer{0};
  index.emplace(encode(orbits[0]), 0);
  std::vector<Edge> edges;
  for (std::size_t head = 0; head < orbits.size(); ++head) {
    check_size(static_cast<double>(orbits.size()), limits, "lattice quotient");
    const Orbit x = orbits[head];
    const double size = orbit_size(x);
    // neighbor orbit -> number of lattice neighbors of the representative in it
    std::vector<std::pair<VertexId, double>> counts;
    for (int k = 0; k < d; ++k) {
      for (int sign : {1, -1}) {
        Orbit y = x;
        y[k] = std::abs(y[k] + sign);
        std::sort(y.begin(), y.end(), std::greater<>());
        std::int64_t l1 = 0;
        for (std::int64_t c : y) l1 += c;
        if (l1 > static_cast<std::int64_t>(radius)) continue;
        const auto [it, inserted] = index.emplace(encode(y), static_cast<VertexId>(orbits.size()));
        if (inserted) {
          orbits.push_back(y);
          layer.push_back(static_cast<std::uint32_t>(l1));
        }
        auto c = std::find_if(counts.begin(), counts.end(),
                              [&](const auto& e) { return e.first == it->second; });
        if (c == counts.end()) {
          counts.emplace_back(it->second, 1.0);
        } else {
          c->second += 1.0;
        }
      }
    }
    for (const auto& [nbr, count] : counts) {
      if (head < nbr) edges.push_back({static_cast<VertexId>(head), nbr, size * count});
    }
  }

  std::vector<double> sizes(orbits.size());
  for (std::size_t i = 0; i < orbits.size(); ++i) sizes[i] = orbit_size(orbits[i]);

  TruncatedGraph t;
  t.name = "Z^" + std::to_string(d) + "/B_" + std::to_string(d);
  t.graph = build_graph(edges);
  t.center = 0;
  t.trust_radius = radius;
  finish_truncation(t, layer, [&](VertexId x) { return 2.0 * d * sizes[x]; });
  return t;
}

TruncatedGraph cayley_ball(const GroupLaw& law, const std::vector<GroupElement>& generators,
                           std::uint32_t radius, const BuildLimits& limits) {
  check_radius(radius);
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "generator list is empty");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (generators[i] == generators[j]) {
        throw Error(ErrorKind::InvalidArgument, "generator " + std::to_string(j) + " repeated");
      }
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const bool has_inverse = std::any_of(generators.begin(), generators.end(), [&](const auto& t) {
      return law.multiply(generators[i], t) == law.identity &&
             law.multiply(t, generators[i]) == law.identity;
    });
    if (!has_inverse) {
      throw Error(ErrorKind::AsymmetricGenerators,
                  "generator " + std::to_string(i) + " has no inverse in the generating set");
    }
  }
  // associativity and identity on generators and their pairwise products
  std::vector<GroupElement> sample = generators;
  for (const auto& s : generators) {
    for (const auto& t : generators) sample.push_back(law.multiply(s, t));
  }
  if (sample.size() > 40) sample.resize(40);
  for (const auto& a : sample) {
    if (law.multiply(a, law.identity) != a || law.multiply(law.identity, a) != a) {
      throw Error(ErrorKind::NotAGroup, "identity element is not neutral");
    }
    for (const auto& b : sample) {
      for (const auto& c : generators) {
        if (law.multiply(law.multiply(a, b), c) != law.multiply(a, law.multiply(b, c))) {
          throw Error(ErrorKind::NotAGroup, "multiplication is not associative on sampled triples");
        }
      }
    }
  }

  const double w = 1.0 / static_cast<double>(generators.size());
  std::unordered_map<GroupElement, VertexId, ElementHash> index;
  std::vector<GroupElement> elements{law.identity};
  std::vector<std::uint32_t> layer{0};
  index.emplace(law.identity, 0);
  std::vector<Edge> edges;
  for (std::size_t head = 0; head < elements.size(); ++head) {
    const GroupElement x = elements[head];
    for (const auto& s : generators) {
      const GroupElement y = law.multiply(x, s);
      VertexId id = 0;
      if (layer[head] < radius) {
        const auto [it, inserted] = index.emplace(y, static_cast<VertexId>(elements.size()));
        if (inserted) {
          elements.push_back(y);
          layer.push_back(layer[head] + 1);
          check_size(static_cast<double>(elements.size()), limits, "Cayley ball");
        }
        id = it->second;
      } else {
        const auto it = index.find(y);
        if (it == index.end()) continue;
        id = it->second;
      }
      if (head <= id) edges.push_back({static_cast<VertexId>(head), id, w});
    }
  }

  TruncatedGraph t;
  t.name = law.name;
  t.graph = build_graph(edges);
  t.center = 0;
  t.trust_radius = radius;
  finish_truncation(t, layer, [](VertexId) { return 1.0; });
  return t;
}

GroupLaw integer_lattice_law(int d) {
  check_dimension(d);
  GroupLaw law;
  law.name = "Z^" + std::to_string(d);
  law.multiply = [](const GroupElement& x, const GroupElement& y) {
    GroupElement z{};
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = checked_add(x[k], y[k]);
    return z;
  };
  return law;
}

std::vector<GroupElement> unit_steps(int d) {
  check_dimension(d);
  std::vector<GroupElement> steps;
  for (int k = 0; k < d; ++k) {
    for (int sign : {1, -1}) {
      GroupElement s{};
      s[k] = sign;
      steps.push_back(s);
    }
  }
  return steps;
}

GroupLaw heisenberg_law() {
  GroupLaw law;
  law.name = "Heisenberg";
  law.multiply = [](const GroupElement& x, const GroupElement& y) {
    // [[1,b,c],[0,1,a],[0,0,1]] * [[1,b',c'],[0,1,a'],[0,0,1]]
    return GroupElement{checked_add(x[0], y[0]), checked_add(x[1], y[1]),
                        checked_add(checked_add(x[2], y[2]), checked_mul(x[1], y[0])), 0};
  };
  return law;
}

std::vector<GroupElement> heisenberg_generators() {
  return {{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 1, 0, 0}, {0, -1, 0, 0}};
}

TruncatedGraph heisenberg(std::uint32_t radius, const BuildLimits& limits) {
  return cayley_ball(heisenberg_law(), heisenberg_generators(), radius, limits);
}

Exhaustion exhaustion_of(const TruncatedGraph& t, const std::vector<std::uint32_t>& radii) {
  if (radii.empty()) throw Error(ErrorKind::InvalidArgument, "exhaustion needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && radii[i] <= radii[i - 1]) {
      throw Error(ErrorKind::NotIncreasing, "exhaustion radii must be strictly increasing");
    }
    if (radii[i] >= t.trust_radius) {
      throw Error(ErrorKind::RadiusExceedsTrust,
                  "radius " + std::to_string(radii[i]) + " is not below the trust radius " +
                      std::to_string(t.trust_radius));
    }
  }
  const auto dist = bfs_distances(t.graph, t.center);
  Exhaustion ex;
  ex.radii = radii;
  for (std::uint32_t r : radii) {
    std::vector<VertexId> members;
    for (std::size_t x = 0; x < dist.size(); ++x) {
      if (dist[x] <= r) members.push_back(static_cast<VertexId>(x));
    }
    ex.sets.emplace_back(dist.size(), std::move(members));
  }
  return ex;
}

}  // namespace potlab
