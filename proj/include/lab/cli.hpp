#pragma once

#include <string>

#include "lab/config.hpp"
#include "lab/profile.hpp"
#include "lab/report.hpp"
#include "lab/simulator.hpp"

namespace lab {

/// Resolves the constants record from the [constants] section: explicit
/// C / I / s0 values, or mode = auto to fit C on the standard battery and
/// search s0 on a log grid.
ProfileConstants constants_from_config(const Config& cfg);

/// Builds the simulation configuration from the [simulate] section.
SimConfig sim_config_from(const Config& cfg, const ProfileConstants& pc);

RunReport cmd_verify_regions(const Config& cfg, const std::string& out_dir, bool deterministic);
RunReport cmd_verify_kernel(const Config& cfg, const std::string& out_dir, bool deterministic);
RunReport cmd_extremal_sweep(const Config& cfg, const std::string& out_dir, bool deterministic);
RunReport cmd_simulate(const Config& cfg, const std::string& out_dir, bool deterministic);
RunReport cmd_bounds(const Config& cfg, const std::string& out_dir, bool deterministic);

/// Full command-line entry. Exit codes: 0 pass, 1 check failure,
/// 2 config or I/O error.
int run_cli(int argc, char** argv);

}  // namespace lab
