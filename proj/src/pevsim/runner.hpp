#ifndef PEVSIM_RUNNER_HPP
#define PEVSIM_RUNNER_HPP

#include <string>
#include <vector>

#include "config.hpp"

namespace pevsim {

// Command layer shared by the C API and (through it) the CLI.  Each command
// writes its artifacts under out_dir and returns the text printed to stdout.

std::string cmd_run(const ScenarioConfig& cfg, const std::string& out_dir);
std::string cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir);
std::string cmd_compare(const ScenarioConfig& cfg, const std::string& out_dir);
std::string cmd_compliance_curve(const ScenarioConfig& cfg, const std::vector<double>& q_grid,
                                 const std::string& out_dir);
// Throws VerificationError when the dump violates any ledger invariant.
std::string cmd_replay_ledger(const std::string& dump_path);

} // namespace pevsim

#endif
