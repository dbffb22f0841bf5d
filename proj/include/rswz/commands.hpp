#pragma once

#include <cstdint>
#include <string>

#include "rswz/config.hpp"

namespace rswz {

// Exit code 0 on success, 1 when a checked bound fails; configuration and
// budget problems are reported by throwing ConfigError / BudgetError.
int cmd_simulate(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);
int cmd_converge(const ExperimentConfig& cfg);
int cmd_demo_mmbm(const std::string& out_dir, std::uint64_t seed);
int cmd_dump_lamperti(const ExperimentConfig& cfg);

}  // namespace rswz
