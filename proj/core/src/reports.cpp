#include "potlab/reports.hpp"

#include <charconv>
#include <cmath>

#ifndef POTLAB_VERSION
#define POTLAB_VERSION "unknown"
#endif

namespace potlab {

namespace {

// shortest round-trip text, so CSV output is reproducible
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json finite(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json rational(const Rational& r) { return r.str(); }

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational(r));
  return out;
}

}  // namespace

std::string version() { return POTLAB_VERSION; }

std::uint64_t config_hash(const Json& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[i] = digits[value & 0xf];
  return out;
}

Json envelope(const Json& config, Json result) {
  return Json{{"tool", "potlab"},
              {"version", version()},
              {"config", config},
              {"config_hash", hex(config_hash(config))},
              {"result", std::move(result)}};
}

Json to_json(const BallProfile& profile) {
  return Json{{"center", profile.center},
              {"ball_measure", profile.ball_measure},
              {"sphere_count", profile.sphere_count},
              {"sphere_measure", profile.sphere_measure}};
}

Json to_json(const SeriesVerdict& verdict) {
  Json cps = Json::array();
  for (const auto& c : verdict.checkpoints) cps.push_back({c.n, c.partial_sum});
  return Json{{"model", to_string(verdict.model)},
              {"divergent", verdict.divergent()},
              {"slope", finite(verdict.slope)},
              {"exponent", verdict.exponent},
              {"fit_residual", verdict.fit_residual},
              {"tail_extended", verdict.tail_extended},
              {"note", verdict.note},
              {"checkpoints", cps}};
}

Json to_json(const VolumeTest& test) {
  return Json{{"p", test.p},           {"rmin", test.rmin},
              {"rmax", test.rmax},     {"slope", test.slope},
              {"fit_residual", test.fit_residual},
              {"constant", test.constant},
              {"slope_limit", test.slope_limit},
              {"pass", test.pass}};
}

Json to_json(const SystemReport& report) {
  Json out{{"status", to_string(report.status)},
           {"checked", report.checked},
           {"tolerance_first", report.tolerance_first},
           {"tolerance_second", report.tolerance_second},
           {"min_first", finite(report.min_first)},
           {"min_second", finite(report.min_second)}};
  if (report.status == SystemStatus::Violation) {
    out["violation"] = {{"vertex", report.vertex},
                        {"inequality", report.inequality},
                        {"value", report.value}};
  }
  return out;
}

Json to_json(const LiouvilleProbe& probe) {
  Json grid = Json::array();
  for (std::size_t i = 0; i < probe.p_grid.size(); ++i) {
    grid.push_back({{"p", probe.p_grid[i]}, {"divergent", static_cast<bool>(probe.p_divergent[i])}});
  }
  return Json{{"q", probe.q},
              {"radii", probe.radii},
              {"values", probe.values},
              {"slope", finite(probe.slope)},
              {"fit_residual", probe.fit_residual},
              {"band", probe.band},
              {"trend", probe.bounded ? "bounded" : "growing"},
              {"series", to_json(probe.series)},
              {"agrees", probe.agrees},
              {"p_grid", grid},
              {"monotone_in_p", probe.monotone_in_p},
              {"note", probe.note}};
}

Json to_json(const PoincareEstimate& estimate) {
  return Json{{"r", estimate.r},
              {"inner_size", estimate.inner_size},
              {"outer_size", estimate.outer_size},
              {"lambda", estimate.lambda},
              {"normalized", estimate.normalized}};
}

Json to_json(const GaussianBand& band) {
  return Json{{"nmax", band.nmax},
              {"dmax", band.dmax},
              {"samples", band.samples},
              {"lower_violations", band.lower_violations},
              {"parity_violations", band.parity_violations},
              {"fitted_rate", band.fitted_rate},
              {"fit_residual", band.fit_residual},
              {"lower_rate", band.lower_rate},
              {"upper_rate", band.upper_rate},
              {"lower_constant", band.lower_constant},
              {"upper_constant", finite(band.upper_constant)},
              {"pass", band.pass}};
}

Json to_json(const BatteryReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"d", c.d},
                     {"p", c.p},
                     {"expected_divergent", c.expected_divergent},
                     {"parabolic", to_json(c.parabolic)},
                     {"sufficient", to_json(c.sufficient)},
                     {"agrees", c.agrees},
                     {"dominance", c.dominance}});
  }
  return Json{{"N", report.N},
              {"cells", cells},
              {"monotone_in_p", report.monotone_in_p},
              {"pass", report.pass}};
}

Json to_json(const CapacitySolution& solution, bool with_optimizer) {
  Json out{{"formulation", to_string(solution.formulation)},
           {"value", solution.value},
           {"iterations", solution.iterations},
           {"certified_gap", finite(solution.certified_gap)}};
  if (with_optimizer) out["optimizer"] = solution.optimizer;
  return out;
}

Json to_json(const HarmonicCapacity& harmonic) {
  return Json{{"solution", to_json(harmonic.solution, true)},
              {"equilibrium_measure", harmonic.equilibrium_measure},
              {"charge", harmonic.charge},
              {"total_variation", harmonic.total_variation}};
}

Json to_json(const EquivalenceReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.order_checks) {
    checks.push_back({{"kind", c.kind}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  return Json{{"dual", to_json(report.dual)},
              {"potential", to_json(report.potential)},
              {"laplacian", to_json(report.laplacian)},
              {"max_deviation", report.max_deviation},
              {"max_relative_deviation", report.max_relative_deviation},
              {"tolerance", report.tolerance},
              {"agree", report.agree},
              {"order_checks", checks},
              {"domain_values", report.domain_values},
              {"pass", report.pass}};
}

Json to_json(const ExhaustionGreen& green) {
  Json out{{"radii", green.radii},
           {"values", green.values},
           {"increments", green.increments},
           {"monotone", green.monotone}};
  out["extrapolated"] = green.extrapolated ? Json(*green.extrapolated) : Json(nullptr);
  return out;
}

Json to_json(const GreenBandReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"x", e.x},
                       {"y", e.y},
                       {"distance", e.distance},
                       {"green", e.green},
                       {"series", e.series},
                       {"ratio", e.ratio}});
  }
  return Json{{"entries", entries},
              {"min_ratio", report.min_ratio},
              {"max_ratio", report.max_ratio},
              {"width", report.width},
              {"band_limit", report.band_limit},
              {"pass", report.pass}};
}

Json to_json(const SmoothingCoefficients& coeffs) {
  return Json{{"kmax", coeffs.kmax},
              {"c", rationals(coeffs.c)},
              {"a", rationals(coeffs.a)},
              {"a_bar", rationals(coeffs.a_bar)},
              {"b", rationals(coeffs.b)},
              {"b_bar", rationals(coeffs.b_bar)}};
}

Json to_json(const SandwichReport& report) {
  return Json{{"l", report.l},
              {"lower_margin", report.lower_margin},
              {"upper_margin", report.upper_margin},
              {"coarse_lower_margin", report.coarse_lower_margin},
              {"coarse_upper_margin", report.coarse_upper_margin},
              {"pass", report.pass}};
}

Json to_json(const StructureReport& report) {
  return Json{{"vertex_weight_defect", report.vertex_weight_defect},
              {"exact_weight_mismatches", report.exact_weight_mismatches},
              {"loops_everywhere", report.loops_everywhere},
              {"alpha", report.alpha},
              {"hat_alpha", report.hat_alpha},
              {"min_loop_ratio", report.min_loop_ratio},
              {"min_old_edge_ratio", report.min_old_edge_ratio},
              {"delta_condition", report.delta_condition},
              {"balls_checked", report.balls_checked},
              {"ball_mismatches", report.ball_mismatches},
              {"pairs_checked", report.pairs_checked},
              {"distance_violations", report.distance_violations},
              {"pass", report.pass}};
}

Json to_json(const GreenComparisonReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"x", e.x},
                       {"y", e.y},
                       {"half_lower", e.half_lower},
                       {"hat_sum", e.hat_sum},
                       {"upper", e.upper},
                       {"holds", e.holds}});
  }
  return Json{{"l", report.l}, {"entries", entries}, {"pass", report.pass}};
}

void write_profile_csv(std::ostream& out, const BallProfile& profile) {
  out << "radius,ball_measure,sphere_count,sphere_measure\n";
  for (std::size_t r = 0; r < profile.ball_measure.size(); ++r) {
    out << r << ',' << num(profile.ball_measure[r]) << ',' << num(profile.sphere_count[r]) << ','
        << num(profile.sphere_measure[r]) << '\n';
  }
}

void write_checkpoints_csv(std::ostream& out, const SeriesVerdict& verdict) {
  out << "n,partial_sum\n";
  for (const auto& c : verdict.checkpoints) out << c.n << ',' << num(c.partial_sum) << '\n';
}

void write_battery_csv(std::ostream& out, const BatteryReport& report) {
  out << "d,p,expected,parabolic,parabolic_slope,sufficient,sufficient_slope,agrees\n";
  for (const auto& c : report.cells) {
    out << c.d << ',' << num(c.p) << ',' << (c.expected_divergent ? "divergent" : "convergent")
        << ',' << to_string(c.parabolic.model) << ',' << num(c.parabolic.slope) << ','
        << to_string(c.sufficient.model) << ',' << num(c.sufficient.slope) << ','
        << (c.agrees ? "yes" : "no") << '\n';
  }
}

}  // namespace potlab
