#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rswz/analysis.hpp"
#include "rswz/jumps.hpp"
#include "rswz/model.hpp"

namespace rswz {

// Fully resolved run description. Parsed once from a single JSON document;
// CLI flags may override master_seed, workers, and out_dir afterwards.
struct ExperimentConfig {
  nlohmann::json raw;

  CoefficientSet model;
  JumpGenerator jumps;
  Regime j0 = 0;

  std::string driver_kind = "polygonal";  // polygonal | transport
  double lambda = 256.0;

  double T = 1.0;
  StepRule step_rule;

  std::uint64_t master_seed = 1;
  int n_seeds = 1;
  int workers = 1;

  double slack_rel = 1e-3;
  double slack_abs = 1e-6;
  double x_slack_rel = 1e-6;
  double mbar_override = -1.0;  // negative: use the declared per-regime constants

  std::vector<double> lambda_grid;
  int n_paths = 200;
  double gamma = 1.0, epsilon = 0.05, q = 2.0;
  double budget_max_steps = 4e9;

  Grid2d validate_grid;
  Grid2d dump_grid;

  std::string out_dir = ".";
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Sorted-key, whitespace-free dump used for hashing and byte-stable output.
std::string canonical_json(const nlohmann::json& j);

// FNV-1a over the canonical dump with volatile keys (workers, out) removed,
// so reruns that differ only in parallelism or output directory hash alike.
std::uint64_t config_hash(const nlohmann::json& j);

}  // namespace rswz
