#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "potlab/builders.hpp"

namespace potlab::cli {

// Host names: lattice (with --d), quotient (with --d), heisenberg, path,
// z<d> for lattice d, hat-<name> for the hat graph of a host of twice the
// radius, and edges:<file> for an edge list centered at vertex 0.
struct HostSpec {
  std::string name = "lattice";
  int d = 2;
  std::uint32_t R = 10;

  nlohmann::json to_json() const;
};

TruncatedGraph make_host(const HostSpec& spec);

}  // namespace potlab::cli
