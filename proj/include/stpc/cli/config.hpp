#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stpc/augmented_system.hpp"
#include "stpc/codesign_det.hpp"
#include "stpc/logic_network.hpp"
#include "stpc/simulator.hpp"

namespace stpc::cli {

struct OutputPaths {
  std::string trajectory;
  std::string report;
  std::string tree;
};

// A validated problem instance. Every field is cross-checked on load.
struct ProblemConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  logic::NetworkShape shape;
  // Rule set used by the deterministic solver.
  logic::LogicalNetwork network;
  // Present when the config has a stochastic block.
  std::optional<logic::LogicalNetwork> stochastic_network;
  logic::CompiledNetwork compiled;
  std::optional<logic::CompiledNetwork> compiled_stochastic;
  SwitchedPlant plant;
  std::size_t horizon = 1;
  SolverOptions solver;
  MonteCarloConfig montecarlo;
  std::optional<HybridState> initial_state;
  OutputPaths output;
};

// Parses and validates a JSON document. `source` names it in messages.
// Throws ConfigError (or a more specific domain error) on invalid input.
ProblemConfig parse_config(const std::string& text,
                           const std::string& source = "<config>");

// Reads `path`; throws IoError when it cannot be read.
ProblemConfig load_config(const std::string& path);

}  // namespace stpc::cli
