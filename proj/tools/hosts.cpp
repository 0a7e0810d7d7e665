#include "hosts.hpp"

#include <algorithm>
#include <cctype>

#include "potlab/edge_list.hpp"
#include "potlab/error.hpp"
#include "potlab/smoothing.hpp"

namespace potlab::cli {

nlohmann::json HostSpec::to_json() const { return {{"name", name}, {"d", d}, {"R", R}}; }

namespace {

TruncatedGraph path_host(std::uint32_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "path needs at least two vertices");
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  TruncatedGraph t;
  t.name = "P" + std::to_string(n);
  t.graph = build_graph(edges);
  t.boundary = VertexSet(n, {});
  t.profile = volume_profile(t.graph, 0, n - 1);
  t.trust_radius = n - 1;
  return t;
}

TruncatedGraph file_host(const std::string& path) {
  TruncatedGraph t;
  t.name = path;
  t.graph = load_edge_list(path);
  const auto dist = bfs_distances(t.graph, 0);
  std::uint32_t ecc = 0;
  for (auto v : dist) ecc = std::max(ecc, v);
  t.boundary = VertexSet(t.graph.vertex_count(), {});
  t.trust_radius = ecc;
  t.profile = volume_profile(t.graph, 0, ecc);
  return t;
}

}  // namespace

TruncatedGraph make_host(const HostSpec& spec) {
  const std::string& n = spec.name;
  if (n.rfind("hat-", 0) == 0) {
    HostSpec base = spec;
    base.name = n.substr(4);
    base.R = 2 * spec.R;
    return hat_truncated(make_host(base));
  }
  if (n.rfind("edges:", 0) == 0) return file_host(n.substr(6));
  if (n == "lattice") return lattice(spec.d, spec.R);
  if (n == "quotient") return lattice_quotient(spec.d, spec.R);
  if (n == "heisenberg") return heisenberg(spec.R);
  if (n == "path") return path_host(spec.R);
  if (n.size() >= 2 && n[0] == 'z' && std::isdigit(static_cast<unsigned char>(n[1]))) {
    return lattice(std::stoi(n.substr(1)), spec.R);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown host '" + n + "'");
}

}  // namespace potlab::cli
