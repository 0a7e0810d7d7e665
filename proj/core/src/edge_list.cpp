#include "potlab/edge_list.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "potlab/error.hpp"

namespace potlab {

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    double w = 0.0;
    if (!(fields >> u)) continue;  // blank or comment-only line
    if (!(fields >> v >> w)) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'u v w'");
    }
    std::string extra;
    if (fields >> extra) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": trailing field '" + extra + "'");
    }
    if (u < 0 || v < 0 || u > 0xFFFFFFFELL || v > 0xFFFFFFFELL) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": vertex index out of range");
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  return edges;
}

WeightedGraph read_edge_list(std::istream& in) {
  const auto edges = parse_edge_list(in);
  return build_graph(edges);
}

WeightedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# vertices " << g.vertex_count() << " edges " << g.edge_count() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.u << ' ' << e.v << ' ' << buf << '\n';
  }
}

void save_edge_list(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  write_edge_list(out, g);
}

}  // namespace potlab
