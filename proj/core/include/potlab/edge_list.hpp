#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

// Plain-text edge list: one undirected edge per line as "u v w",
// whitespace separated; '#' starts a comment; a loop is written "u u w".

std::vector<Edge> parse_edge_list(std::istream& in);
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::filesystem::path& path);

/// Writes every stored edge with 17 significant digits so that reading the
/// output back reproduces the weights bit for bit.
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void save_edge_list(const std::filesystem::path& path, const WeightedGraph& g);

}  // namespace potlab
