#include "potlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "potlab/error.hpp"
#include "potlab/walk.hpp"

namespace potlab {

namespace {

template <typename T>
struct Dense {
  std::size_t n = 0;
  std::vector<T> a;

  explicit Dense(std::size_t size) : n(size), a(size * size, T(0)) {}
  static Dense identity(std::size_t size) {
    Dense m(size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = T(1);
    return m;
  }
  T& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

template <typename T>
Dense<T> multiply(const Dense<T>& x, const Dense<T>& y) {
  Dense<T> out(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      if (x(i, k) == T(0)) continue;
      for (std::size_t j = 0; j < x.n; ++j) out(i, j) += x(i, k) * y(k, j);
    }
  }
  return out;
}

template <typename T>
void axpy(Dense<T>& y, const T& alpha, const Dense<T>& x) {
  for (std::size_t i = 0; i < y.a.size(); ++i) y.a[i] += alpha * x.a[i];
}

Rational exact(double v) {
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r{BigInt(scaled)};
  exponent -= 53;
  if (exponent >= 0) {
    r *= Rational(BigInt(1) << exponent);
  } else {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

double to_double(const double& v) { return v; }
double to_double(const Rational& v) { return v.convert_to<double>(); }

template <typename T>
T convert(double v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return exact(v);
  } else {
    return v;
  }
}

// Transition matrices of g and of its hat graph in arithmetic T. In exact
// mode the hat weights are formed from the rational weights of g.
template <typename T>
std::pair<Dense<T>, Dense<T>> transition_pair(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  Dense<T> W(n);
  std::vector<T> mu(n, T(0));
  for (const Edge& e : g.edges()) {
    const T w = convert<T>(e.weight);
    W(e.u, e.v) = w;
    W(e.v, e.u) = w;
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) mu[x] += W(x, y);
  }
  Dense<T> P(n), Phat(n);
  if constexpr (std::is_same_v<T, Rational>) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        T two_step(0);
        for (std::size_t z = 0; z < n; ++z) {
          if (W(x, z) != 0 && W(z, y) != 0) two_step += W(x, z) * W(z, y) / mu[z];
        }
        const T hat = W(x, y) / 2 + two_step / 2;
        P(x, y) = W(x, y) / mu[x];
        Phat(x, y) = hat / mu[x];
      }
    }
  } else {
    const WeightedGraph h = hat_graph(g);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) P(x, y) = W(x, y) / mu[x];
      for (const Neighbor& nb : h.neighbors(static_cast<VertexId>(x))) {
        Phat(x, nb.vertex) = nb.weight / h.vertex_weight(static_cast<VertexId>(x));
      }
    }
  }
  return {std::move(P), std::move(Phat)};
}

void check_dense_size(const WeightedGraph& g, Arithmetic arithmetic) {
  const std::size_t cap = arithmetic == Arithmetic::Exact ? 30 : 200;
  if (g.vertex_count() > cap) {
    throw Error(ErrorKind::SizeLimit, "dense power checks are capped at " + std::to_string(cap) +
                                          " vertices in this arithmetic");
  }
}

template <typename T>
double binomial_identity_impl(const WeightedGraph& g, std::size_t nmax) {
  auto [P, Phat] = transition_pair<T>(g);
  const std::size_t n = g.vertex_count();
  std::vector<Dense<T>> powers{Dense<T>::identity(n)};
  for (std::size_t k = 1; k <= 2 * nmax; ++k) powers.push_back(multiply(powers.back(), P));
  Dense<T> hat_power = Dense<T>::identity(n);
  double worst = 0.0;
  for (std::size_t k = 0; k <= nmax; ++k) {
    if (k > 0) hat_power = multiply(hat_power, Phat);
    Dense<T> rhs(n);
    T binom(1);
    for (std::size_t m = 0; m <= k; ++m) {
      axpy(rhs, binom, powers[k + m]);
      binom = binom * T(static_cast<long long>(k - m)) / T(static_cast<long long>(m + 1));
    }
    T scale(1);
    for (std::size_t i = 0; i < k; ++i) scale /= 2;
    for (std::size_t i = 0; i < rhs.a.size(); ++i) {
      const T diff = hat_power.a[i] - scale * rhs.a[i];
      worst = std::max(worst, std::abs(to_double(diff)));
    }
  }
  return worst;
}

template <typename T>
SandwichReport sandwich_impl(const WeightedGraph& g, std::size_t l) {
  auto [P, Phat] = transition_pair<T>(g);
  const std::size_t n = g.vertex_count();
  const SmoothingCoefficients coeffs = coefficients(l);
  Dense<T> lower(n), upper(n), middle(n), coarse_lower(n), coarse_upper(n);
  Dense<T> power = Dense<T>::identity(n);
  Dense<T> hat_power = Dense<T>::identity(n);
  for (std::size_t k = 0; k <= 2 * l; ++k) {
    if (k > 0) power = multiply(power, P);
    T ck;
    if constexpr (std::is_same_v<T, Rational>) {
      ck = coeffs.c[k];
    } else {
      ck = coeffs.c[k].convert_to<double>();
    }
    axpy(upper, ck, power);
    axpy(coarse_upper, T(1), power);
    if (k <= l) {
      if (k > 0) hat_power = multiply(hat_power, Phat);
      axpy(lower, ck, power);
      axpy(coarse_lower, T(1) / 2, power);
      axpy(middle, T(1), hat_power);
    }
  }
  SandwichReport report;
  report.l = l;
  report.lower_margin = report.upper_margin = std::numeric_limits<double>::infinity();
  report.coarse_lower_margin = report.coarse_upper_margin = std::numeric_limits<double>::infinity();
  bool exact_ok = true;
  for (std::size_t i = 0; i < middle.a.size(); ++i) {
    const T dl = middle.a[i] - lower.a[i];
    const T du = upper.a[i] - middle.a[i];
    const T cl = middle.a[i] - coarse_lower.a[i];
    const T cu = coarse_upper.a[i] - middle.a[i];
    if constexpr (std::is_same_v<T, Rational>) {
      exact_ok = exact_ok && dl >= 0 && du >= 0 && cl >= 0 && cu >= 0;
    }
    report.lower_margin = std::min(report.lower_margin, to_double(dl));
    report.upper_margin = std::min(report.upper_margin, to_double(du));
    report.coarse_lower_margin = std::min(report.coarse_lower_margin, to_double(cl));
    report.coarse_upper_margin = std::min(report.coarse_upper_margin, to_double(cu));
  }
  if constexpr (std::is_same_v<T, Rational>) {
    report.pass = exact_ok;
  } else {
    const double slack = -1e-12;
    report.pass = report.lower_margin >= slack && report.upper_margin >= slack &&
                  report.coarse_lower_margin >= slack && report.coarse_upper_margin >= slack;
  }
  return report;
}

BigInt binomial_int(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace

WeightedGraph hat_graph(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<double> acc(n, 0.0);
  std::vector<VertexId> touched;
  std::vector<Edge> edges;
  for (VertexId x = 0; x < n; ++x) {
    touched.clear();
    auto add = [&](VertexId y, double w) {
      if (y < x) return;
      if (acc[y] == 0.0) touched.push_back(y);
      acc[y] += w;
    };
    for (const Neighbor& nb : g.neighbors(x)) add(nb.vertex, 0.5 * nb.weight);
    for (const Neighbor& xz : g.neighbors(x)) {
      const double scale = 0.5 * xz.weight / g.vertex_weight(xz.vertex);
      for (const Neighbor& zy : g.neighbors(xz.vertex)) add(zy.vertex, scale * zy.weight);
    }
    std::sort(touched.begin(), touched.end());
    for (VertexId y : touched) {
      edges.push_back({x, y, acc[y]});
      acc[y] = 0.0;
    }
  }
  return build_graph(edges);
}

TruncatedGraph hat_truncated(const TruncatedGraph& t) {
  if (t.trust_radius < 2) {
    throw Error(ErrorKind::InvalidArgument, "hat host needs trust radius at least 2");
  }
  TruncatedGraph h;
  h.name = "hat " + t.name;
  h.graph = hat_graph(t.graph);
  h.center = t.center;
  h.trust_radius = t.trust_radius / 2;
  const auto dist = bfs_distances(h.graph, h.center);
  std::vector<VertexId> boundary;
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] >= h.trust_radius) boundary.push_back(static_cast<VertexId>(x));
  }
  h.boundary = VertexSet(dist.size(), std::move(boundary));
  BallProfile& prof = h.profile;
  prof.center = h.center;
  double prev_count = 0.0, prev_measure = 0.0;
  for (std::uint32_t n = 0; n <= h.trust_radius; ++n) {
    double count = 0.0;
    for (std::uint32_t m = 0; m <= 2 * n; ++m) count += t.profile.sphere_count[m];
    const double measure = t.profile.ball_measure[2 * n];
    prof.ball_measure.push_back(measure);
    prof.sphere_count.push_back(count - prev_count);
    prof.sphere_measure.push_back(measure - prev_measure);
    prev_count = count;
    prev_measure = measure;
  }
  return h;
}

SmoothingCoefficients coefficients(std::size_t kmax) {
  SmoothingCoefficients out;
  out.kmax = kmax;
  const std::size_t cmax = 2 * kmax + 1;
  out.c.resize(cmax + 1);
  for (std::size_t k = 0; k <= cmax; ++k) {
    Rational sum = 0;
    for (std::size_t m = 0; 2 * m <= k; ++m) {
      const std::size_t n = k - m;
      sum += Rational(binomial_int(n, m), BigInt(1) << n);
    }
    out.c[k] = sum;
  }
  out.a.resize(kmax + 1);
  out.a_bar.resize(kmax + 1);
  out.b.assign(kmax + 1, Rational(0));
  out.b_bar.assign(kmax + 1, Rational(0));
  for (std::size_t k = 0; k <= kmax; ++k) {
    out.a[k] = Rational(BigInt(1) << (2 * k)) * out.c[2 * k];
    out.a_bar[k] = Rational(BigInt(1) << (2 * k + 1)) * out.c[2 * k + 1];
    if (k >= 2) {
      out.b[k] = out.a[k] - out.a[k - 1];
      out.b_bar[k] = out.a_bar[k] - out.a_bar[k - 1];
    }
  }
  return out;
}

std::vector<std::string> coefficient_identity_failures(const SmoothingCoefficients& coeffs) {
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what, std::size_t k) {
    failures.push_back(what + " fails at k=" + std::to_string(k));
  };
  const Rational half(1, 2);
  for (std::size_t k = 0; k < coeffs.c.size(); ++k) {
    if (coeffs.c[k] < half || coeffs.c[k] > 1) fail("1/2 <= c_k <= 1", k);
  }
  Rational a_closed = 3, a_bar_closed = 5;
  for (std::size_t k = 0; k <= coeffs.kmax; ++k) {
    Rational a_sum = 0, a_bar_sum = 0;
    for (std::size_t m = 0; m <= k; ++m) {
      a_sum += Rational(binomial_int(2 * k - m, m) << m);
      a_bar_sum += Rational(binomial_int(2 * k + 1 - m, m) << m);
    }
    if (coeffs.a[k] != a_sum) fail("a_k = sum 2^m C(2k-m, m)", k);
    if (coeffs.a_bar[k] != a_bar_sum) fail("a_bar_k = sum 2^m C(2k+1-m, m)", k);
    if (k >= 2) {
      if (coeffs.b[k] != Rational(BigInt(1) << (2 * k - 1))) fail("b_k = 2^{2k-1}", k);
      if (coeffs.b_bar[k] != Rational(BigInt(1) << (2 * k))) fail("b_bar_k = 2^{2k}", k);
      a_closed += Rational(BigInt(1) << (2 * k - 1));
      a_bar_closed += Rational(BigInt(1) << (2 * k));
      if (coeffs.a[k] != a_closed) fail("a_k = 3 + sum 2^{2m-1}", k);
      if (coeffs.a_bar[k] != a_bar_closed) fail("a_bar_k = 5 + sum 2^{2m}", k);
    }
  }
  return failures;
}

double binomial_identity_check(const WeightedGraph& g, std::size_t nmax, Arithmetic arithmetic) {
  check_dense_size(g, arithmetic);
  return arithmetic == Arithmetic::Exact ? binomial_identity_impl<Rational>(g, nmax)
                                         : binomial_identity_impl<double>(g, nmax);
}

SandwichReport sandwich_check(const WeightedGraph& g, std::size_t l, Arithmetic arithmetic) {
  check_dense_size(g, arithmetic);
  return arithmetic == Arithmetic::Exact ? sandwich_impl<Rational>(g, l)
                                         : sandwich_impl<double>(g, l);
}

StructureReport structure_report(const WeightedGraph& g, std::size_t samples, std::uint32_t nmax,
                                 std::uint64_t seed) {
  const WeightedGraph h = hat_graph(g);
  StructureReport r;
  r.loops_everywhere = true;
  r.min_loop_ratio = std::numeric_limits<double>::infinity();
  r.min_old_edge_ratio = std::numeric_limits<double>::infinity();
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    r.vertex_weight_defect = std::max(
        r.vertex_weight_defect, std::abs(h.vertex_weight(x) - g.vertex_weight(x)) / g.vertex_weight(x));
    const double loop = h.loop_weight(x);
    if (loop <= 0.0) r.loops_everywhere = false;
    r.min_loop_ratio = std::min(r.min_loop_ratio, loop / h.vertex_weight(x));
    for (const Neighbor& nb : g.neighbors(x)) {
      r.min_old_edge_ratio = std::min(r.min_old_edge_ratio, h.transition(x, nb.vertex));
    }
  }
  std::vector<Rational> mu(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    for (const Neighbor& nb : g.neighbors(x)) mu[x] += exact(nb.weight);
  }
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    Rational hat_mu;
    for (const Neighbor& xz : g.neighbors(x)) {
      const Rational w = exact(xz.weight);
      hat_mu += w / 2;
      for (const Neighbor& zy : g.neighbors(xz.vertex)) {
        hat_mu += w * exact(zy.weight) / (2 * mu[xz.vertex]);
      }
    }
    if (hat_mu != mu[x]) ++r.exact_weight_mismatches;
  }
  r.alpha = p0_constant(g).value_or(0.0);
  r.hat_alpha = p0_constant(h).value_or(0.0);
  const double a2 = r.alpha * r.alpha / 2.0;
  const double slack = 1e-14;
  r.delta_condition = r.loops_everywhere && r.hat_alpha >= a2 - slack &&
                      r.min_loop_ratio >= a2 - slack && r.min_old_edge_ratio >= r.alpha / 2 - slack;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    const VertexId x = pick(rng);
    const auto d = bfs_distances(g, x);
    const auto dh = bfs_distances(h, x);
    for (std::uint32_t n = 0; n <= nmax; ++n) {
      ++r.balls_checked;
      for (std::size_t y = 0; y < d.size(); ++y) {
        if ((dh[y] <= n) != (d[y] <= 2 * n)) {
          ++r.ball_mismatches;
          break;
        }
      }
    }
    const VertexId y = pick(rng);
    ++r.pairs_checked;
    if (!(dh[y] <= d[y] && d[y] <= 2 * dh[y])) ++r.distance_violations;
  }
  r.pass = r.exact_weight_mismatches == 0 && r.vertex_weight_defect <= 1e-14 && r.delta_condition && r.ball_mismatches == 0 &&
           r.distance_violations == 0;
  return r;
}

GreenComparisonReport green_comparison_check(
    const TruncatedGraph& t, std::size_t l, const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  const WeightedGraph h = hat_graph(t.graph);
  GreenComparisonReport report;
  report.l = l;
  report.pass = true;
  for (const auto& [x, y] : pairs) {
    GreenComparisonEntry e;
    e.x = x;
    e.y = y;
    HeatKernelStream walk(t.graph, x), hat_walk(h, x);
    for (std::size_t n = 0; n <= 2 * l; ++n) {
      if (n > 0) walk.advance();
      e.upper += walk.current()[y];
      if (n <= l) {
        e.half_lower += 0.5 * walk.current()[y];
        if (n > 0) hat_walk.advance();
        e.hat_sum += hat_walk.current()[y];
      }
    }
    const double slack = 1e-12 * std::max(1.0, e.upper);
    e.holds = e.half_lower <= e.hat_sum + slack && e.hat_sum <= e.upper + slack;
    report.pass = report.pass && e.holds;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace potlab
