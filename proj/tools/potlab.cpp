#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hosts.hpp"
#include "potlab/capacity.hpp"
#include "potlab/criteria.hpp"
#include "potlab/edge_list.hpp"
#include "potlab/error.hpp"
#include "potlab/green.hpp"
#include "potlab/reports.hpp"
#include "potlab/smoothing.hpp"

using namespace potlab;
using potlab::cli::HostSpec;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Outcome {
  Json config;
  Json result;
  bool pass = true;
};

void add_host_options(CLI::App* cmd, HostSpec& host, const std::string& flag = "--host") {
  cmd->add_option(flag, host.name, "host graph (lattice, quotient, heisenberg, path, z<d>, hat-<host>, edges:<file>)")
      ->capture_default_str();
  cmd->add_option("--d", host.d, "lattice dimension")->capture_default_str()->check(CLI::Range(1, 10));
  cmd->add_option("--R", host.R, "truncation radius")->capture_default_str()->check(CLI::Range(1u, 100000u));
}

VertexSet parse_set(const TruncatedGraph& t, const std::string& list, int radius) {
  if (radius >= 0) return ball(t.graph, t.center, static_cast<std::uint32_t>(radius));
  std::vector<VertexId> members;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const unsigned long v = std::stoul(item);
    if (v >= t.graph.vertex_count()) {
      throw Error(ErrorKind::InvalidVertex, "vertex " + item + " is not in the host");
    }
    members.push_back(static_cast<VertexId>(v));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return VertexSet(t.graph.vertex_count(), std::move(members));
}

Json set_json(const VertexSet& s) { return std::vector<VertexId>(s.begin(), s.end()); }

// One vertex per distance 0..dmax from the center (the lowest id at that distance).
std::vector<std::pair<VertexId, VertexId>> radial_pairs(const TruncatedGraph& t, std::uint32_t dmax) {
  const auto dist = bfs_distances(t.graph, t.center);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::uint32_t k = 0; k <= dmax; ++k) {
    for (VertexId y = 0; y < dist.size(); ++y) {
      if (dist[y] == k) {
        pairs.emplace_back(t.center, y);
        break;
      }
    }
  }
  return pairs;
}

int error_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidVertex:
      return kUsage;
    default:
      return kViolation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"potlab: potential theory on weighted graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  std::string output;
  bool timings = false;
  app.add_option("-o,--output", output, "write the JSON report to this file instead of stdout");
  app.add_flag("--timings", timings, "record wall-clock seconds in the report");

  std::function<Outcome()> run;

  // build -------------------------------------------------------------------
  auto* build = app.add_subcommand("build", "build a truncated host, write its edge list and profile");
  HostSpec build_host;
  std::string edges_path, profile_path;
  build->add_option("host", build_host.name, "host graph")->required();
  build->add_option("--d", build_host.d, "lattice dimension")->check(CLI::Range(1, 10));
  build->add_option("--R", build_host.R, "truncation radius")->check(CLI::Range(1u, 100000u));
  build->add_option("--edges", edges_path, "edge list output (default <host>.edges)");
  build->add_option("--profile", profile_path, "profile CSV output (default <host>.profile.csv)");
  build->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(build_host);
      std::string stem = build_host.name + "-R" + std::to_string(build_host.R);
      if (build_host.name == "lattice" || build_host.name == "quotient") {
        stem = build_host.name + "-d" + std::to_string(build_host.d) + "-R" +
               std::to_string(build_host.R);
      }
      const std::string ep = edges_path.empty() ? stem + ".edges" : edges_path;
      const std::string pp = profile_path.empty() ? stem + ".profile.csv" : profile_path;
      save_edge_list(ep, t.graph);
      std::ofstream csv(pp);
      if (!csv) throw Error(ErrorKind::InvalidArgument, "cannot write " + pp);
      write_profile_csv(csv, t.profile);
      Outcome o;
      o.config = {{"command", "build"}, {"host", build_host.to_json()}};
      o.result = {{"name", t.name},
                  {"vertices", t.graph.vertex_count()},
                  {"edges", t.graph.edge_count()},
                  {"center", t.center},
                  {"trust_radius", t.trust_radius},
                  {"boundary", t.boundary.size()},
                  {"edge_list", ep},
                  {"profile_csv", pp}};
      return o;
    };
  });

  // capacity ----------------------------------------------------------------
  auto* capacity = app.add_subcommand("capacity", "L^p-capacity in three formulations");
  HostSpec cap_host;
  cap_host.name = "path";
  cap_host.R = 4;
  std::string instance, u_list, k_list;
  int u_radius = -1, k_radius = -1;
  double p = 2.0, tol = 1e-10;
  add_host_options(capacity, cap_host);
  capacity->add_option("--instance", instance, "named instance (p4: path on 4 vertices, U={1,2}, K={1})")
      ->check(CLI::IsMember({"p4"}));
  capacity->add_option("--U", u_list, "comma-separated vertices of U");
  capacity->add_option("--U-radius", u_radius, "U = B(center, r)");
  capacity->add_option("--K", k_list, "comma-separated vertices of K");
  capacity->add_option("--K-radius", k_radius, "K = B(center, r)");
  capacity->add_option("--p", p, "exponent, p >= 1")->capture_default_str()->check(CLI::Range(1.0, 1e6));
  capacity->add_option("--tol", tol, "solver tolerance")->capture_default_str();
  capacity->callback([&] {
    run = [&] {
      if (instance == "p4") {
        cap_host = HostSpec{"path", 2, 4};
        u_list = "1,2";
        k_list = "1";
        u_radius = k_radius = -1;
      }
      const TruncatedGraph t = cli::make_host(cap_host);
      const VertexSet U = parse_set(t, u_list, u_radius);
      const VertexSet K = parse_set(t, k_list, k_radius);
      Outcome o;
      o.config = {{"command", "capacity"}, {"host", cap_host.to_json()}, {"U", set_json(U)},
                  {"K", set_json(K)},     {"p", p},                     {"tolerance", tol}};
      if (p == 1.0) {
        const HarmonicCapacity h = harmonic_capacity(t.graph, U, K);
        o.result = to_json(h);
        o.result["note"] = "p = 1: only the harmonic capacity is computed";
        return o;
      }
      CapacityOptions options;
      options.tolerance = tol;
      try {
        o.result = to_json(equivalence_report(CapacityProblem{&t.graph, U, K, p}, {}, options));
      } catch (const EquivalenceViolation& e) {
        o.result = to_json(e.report());
        o.result["violation"] = e.what();
        o.pass = false;
      }
      return o;
    };
  });

  // criteria ----------------------------------------------------------------
  auto* criteria = app.add_subcommand("criteria", "volume-growth criteria and diagnostics");
  criteria->require_subcommand(1);

  auto* battery = criteria->add_subcommand("zd-battery", "series verdicts on Z^d for a grid of p");
  std::uint64_t N = 10'000;
  std::string csv_path;
  battery->add_option("--N", N, "series length")->capture_default_str()->check(CLI::Range(8ull, 10'000'000ull));
  battery->add_option("--csv", csv_path, "verdict matrix CSV");
  battery->callback([&] {
    run = [&] {
      const BatteryReport report = zd_battery({2, 3, 4, 5}, {1.25, 1.5, 2.0, 2.5, 3.0}, N);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        write_battery_csv(out, report);
      }
      return Outcome{{{"command", "criteria zd-battery"}, {"N", N}}, to_json(report), report.pass};
    };
  });

  auto* series = criteria->add_subcommand("series", "one series on the closed-form Z^d profile");
  std::string kind = "parabolic";
  int series_d = 3;
  double series_p = 2.0;
  series->add_option("--kind", kind, "nash-williams, parabolic or sufficient")
      ->capture_default_str()
      ->check(CLI::IsMember({"nash-williams", "parabolic", "sufficient"}));
  series->add_option("--d", series_d, "dimension")->capture_default_str()->check(CLI::Range(1, 64));
  series->add_option("--p", series_p, "exponent")->capture_default_str()->check(CLI::Range(1.0, 1e6));
  series->add_option("--N", N, "series length")->capture_default_str()->check(CLI::Range(8ull, 10'000'000ull));
  series->add_option("--csv", csv_path, "checkpoint CSV");
  series->callback([&] {
    run = [&] {
      const BallProfile profile = lattice_profile(series_d, N);
      SeriesVerdict v;
      if (kind == "nash-williams") {
        v = nash_williams(profile, N);
      } else if (kind == "parabolic") {
        v = lp_parabolic_series(profile, series_p, N);
      } else {
        v = lp_sufficient_series(profile, series_p, N);
      }
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        write_checkpoints_csv(out, v);
      }
      Json config{{"command", "criteria series"}, {"kind", kind}, {"d", series_d}, {"N", N}};
      if (kind != "nash-williams") config["p"] = series_p;
      return Outcome{config, to_json(v), true};
    };
  });

  auto* volume = criteria->add_subcommand("volume-test", "V(o, r) <= C r^{2p} (log r)^{p-1} on a host profile");
  HostSpec vol_host;
  vol_host.name = "heisenberg";
  vol_host.R = 20;
  add_host_options(volume, vol_host);
  volume->add_option("--p", p, "exponent")->capture_default_str()->check(CLI::Range(1.0, 1e6));
  volume->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(vol_host);
      const VolumeTest test = corollary_volume_test(t.profile, p);
      return Outcome{{{"command", "criteria volume-test"}, {"host", vol_host.to_json()}, {"p", p}},
                     to_json(test), test.pass};
    };
  });

  auto* liouville = criteria->add_subcommand("liouville", "L^q-Green trend along an exhaustion");
  HostSpec liou_host;
  liou_host.name = "lattice";
  liou_host.d = 3;
  liou_host.R = 30;
  std::vector<std::uint32_t> radii;
  double q = 2.0;
  add_host_options(liouville, liou_host);
  liouville->add_option("--q", q, "exponent q > 1")->capture_default_str()->check(CLI::Range(1.000001, 1e6));
  liouville->add_option("--radii", radii, "exhaustion radii (default 4 evenly spaced)")->delimiter(',');
  liouville->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(liou_host);
      std::vector<std::uint32_t> r = radii;
      if (r.empty()) {
        for (std::uint32_t k = 1; k <= 4; ++k) r.push_back(k * (t.trust_radius - 1) / 4);
      }
      const LiouvilleProbe probe = liouville_probe(t, exhaustion_of(t, r), q);
      return Outcome{{{"command", "criteria liouville"}, {"host", liou_host.to_json()}, {"q", q}, {"radii", r}},
                     to_json(probe), true};
    };
  });

  auto* poincare = criteria->add_subcommand("poincare", "empirical Poincare constants on balls");
  HostSpec pi_host;
  pi_host.R = 32;
  std::vector<std::uint32_t> pi_radii{4, 8, 16};
  add_host_options(poincare, pi_host);
  poincare->add_option("--r", pi_radii, "ball radii")->delimiter(',')->capture_default_str();
  poincare->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(pi_host);
      Json rows = Json::array();
      for (auto r : pi_radii) rows.push_back(to_json(poincare_constant(t, r)));
      return Outcome{{{"command", "criteria poincare"}, {"host", pi_host.to_json()}, {"r", pi_radii}},
                     rows, true};
    };
  });

  auto* gaussian = criteria->add_subcommand("gaussian", "two-sided Gaussian fit of the heat kernel");
  HostSpec gauss_host;
  gauss_host.name = "hat-lattice";
  gauss_host.R = 210;
  std::uint32_t nmax = 400, dmax = 10;
  add_host_options(gaussian, gauss_host);
  gaussian->add_option("--nmax", nmax, "largest step count")->capture_default_str();
  gaussian->add_option("--dmax", dmax, "largest distance")->capture_default_str();
  gaussian->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(gauss_host);
      const GaussianBand band = gaussian_band(t, nmax, dmax);
      return Outcome{{{"command", "criteria gaussian"}, {"host", gauss_host.to_json()},
                      {"nmax", nmax}, {"dmax", dmax}},
                     to_json(band), band.pass};
    };
  });

  auto* diagonal = criteria->add_subcommand("diagonal", "lower series from return probabilities");
  HostSpec diag_host;
  diag_host.name = "quotient";
  diag_host.d = 5;
  diag_host.R = 60;
  std::size_t horizon = 0;
  add_host_options(diagonal, diag_host);
  diagonal->add_option("--horizon", horizon, "largest step (default 2R - 1)");
  diagonal->add_option("--q", q, "exponent q > 1")->capture_default_str()->check(CLI::Range(1.000001, 1e6));
  diagonal->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(diag_host);
      const std::size_t H = horizon ? horizon : 2 * t.trust_radius - 1;
      const auto diag = return_probabilities(t.graph, t.center, H);
      return Outcome{{{"command", "criteria diagonal"}, {"host", diag_host.to_json()},
                      {"horizon", H}, {"q", q}},
                     to_json(diagonal_lower_series(diag, q)), true};
    };
  });

  // green -------------------------------------------------------------------
  auto* green = app.add_subcommand("green", "local Green functions");
  green->require_subcommand(1);

  auto* band = green->add_subcommand("band", "Green values against sum n / V(x, n)");
  HostSpec band_host;
  band_host.name = "z3";
  band_host.R = 20;
  std::uint32_t band_dmax = 8;
  double band_limit = 100.0;
  add_host_options(band, band_host, "--graph");
  band->add_option("--dmax", band_dmax, "largest pair distance")->capture_default_str();
  band->add_option("--band", band_limit, "allowed max/min ratio")->capture_default_str();
  band->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(band_host);
      const std::uint32_t inner = std::max(band_dmax, t.trust_radius / 2);
      if (inner + 1 >= t.trust_radius) {
        throw Error(ErrorKind::InvalidArgument, "R too small for the requested pair distance");
      }
      const Exhaustion ex = exhaustion_of(t, {inner, t.trust_radius - 1});
      const auto report = green_band_check(t, ex, radial_pairs(t, band_dmax), t.profile,
                                           t.trust_radius, band_limit);
      return Outcome{{{"command", "green band"}, {"host", band_host.to_json()},
                      {"dmax", band_dmax}, {"band", band_limit}},
                     to_json(report), report.pass};
    };
  });

  auto* exh = green->add_subcommand("exhaustion", "g^{U_i}(o, o) along balls U_i");
  HostSpec exh_host;
  exh_host.name = "z3";
  exh_host.R = 30;
  std::vector<std::uint32_t> exh_radii;
  add_host_options(exh, exh_host, "--graph");
  exh->add_option("--radii", exh_radii, "exhaustion radii (default 4 evenly spaced)")->delimiter(',');
  exh->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(exh_host);
      std::vector<std::uint32_t> r = exh_radii;
      if (r.empty()) {
        for (std::uint32_t k = 1; k <= 4; ++k) r.push_back(k * (t.trust_radius - 1) / 4);
      }
      const auto g = exhaustion_green(t, exhaustion_of(t, r), t.center, t.center);
      return Outcome{{{"command", "green exhaustion"}, {"host", exh_host.to_json()}, {"radii", r}},
                     to_json(g), g.monotone};
    };
  });

  // smooth ------------------------------------------------------------------
  auto* smooth = app.add_subcommand("smooth", "hat-weight transform");
  smooth->require_subcommand(1);

  auto* verify = smooth->add_subcommand("verify", "exact smoothing coefficient table");
  std::size_t kmax = 64;
  verify->add_option("--kmax", kmax, "largest k")->capture_default_str()->check(CLI::Range(2ul, 4096ul));
  verify->callback([&] {
    run = [&] {
      const SmoothingCoefficients c = coefficients(kmax);
      const auto failures = coefficient_identity_failures(c);
      Json result = to_json(c);
      result["identity_failures"] = failures;
      return Outcome{{{"command", "smooth verify"}, {"kmax", kmax}}, result, failures.empty()};
    };
  });

  auto* structure = smooth->add_subcommand("structure", "hat graph against its base graph");
  HostSpec st_host;
  st_host.R = 12;
  std::size_t samples = 20;
  std::uint32_t st_nmax = 5;
  std::uint64_t seed = 7;
  add_host_options(structure, st_host, "--graph");
  structure->add_option("--samples", samples, "sampled vertices and pairs")->capture_default_str();
  structure->add_option("--nmax", st_nmax, "largest hat radius")->capture_default_str();
  structure->add_option("--seed", seed, "sampling seed")->capture_default_str();
  structure->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(st_host);
      const auto report = structure_report(t.graph, samples, st_nmax, seed);
      return Outcome{{{"command", "smooth structure"}, {"host", st_host.to_json()},
                      {"samples", samples}, {"nmax", st_nmax}, {"seed", seed}},
                     to_json(report), report.pass};
    };
  });

  auto* sandwich = smooth->add_subcommand("sandwich", "entrywise hat partial-sum sandwich");
  HostSpec sw_host;
  sw_host.name = "path";
  sw_host.R = 8;
  std::size_t l = 6;
  bool exact = false;
  add_host_options(sandwich, sw_host, "--graph");
  sandwich->add_option("--l", l, "partial sum length")->capture_default_str();
  sandwich->add_flag("--exact", exact, "rational arithmetic");
  sandwich->callback([&] {
    run = [&] {
      const TruncatedGraph t = cli::make_host(sw_host);
      const auto report =
          sandwich_check(t.graph, l, exact ? Arithmetic::Exact : Arithmetic::Floating);
      return Outcome{{{"command", "smooth sandwich"}, {"host", sw_host.to_json()},
                      {"l", l}, {"exact", exact}},
                     to_json(report), report.pass};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = run();
    Json report = envelope(outcome.config, std::move(outcome.result));
    report["pass"] = outcome.pass;
    if (timings) {
      report["seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    const std::string text = report.dump(2) + "\n";
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output);
      if (!out) {
        std::cerr << "error: cannot write " << output << "\n";
        return kUsage;
      }
      out << text;
    }
    return outcome.pass ? kPass : kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return error_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
}
