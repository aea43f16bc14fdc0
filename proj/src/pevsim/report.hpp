#ifndef PEVSIM_REPORT_HPP
#define PEVSIM_REPORT_HPP

#include <span>
#include <string>

#include "config.hpp"
#include "metrics.hpp"
#include "run_result.hpp"

namespace pevsim {

// Stable textual formatting for artifact files; %.12g round-trips the values
// we care about and keeps files byte-identical across reruns.
std::string fmt_g(double v);

// All artifacts are plain text and begin with the tool version and the echoed
// resolved config, so any file is traceable to the exact experiment.
void write_artifact_header(std::ostream& out, const ScenarioConfig& cfg);

void write_resolved_config(const std::string& dir, const ScenarioConfig& cfg);
void write_metrics_csv(const std::string& dir, const ScenarioConfig& cfg,
                       std::span<const RunResult> results, const IndexSummary& summary);
void write_events_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                      int run_index);
void write_stations_csv(const std::string& dir, const ScenarioConfig& cfg,
                        std::span<const RunResult> results);
void write_controller_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                          int run_index);
void write_timeseries_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                          int run_index);
void write_ledger_dump(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                       int run_index);
void write_sweep_csv(const std::string& dir, const ScenarioConfig& cfg,
                     std::span<const SweepPoint> surface);
void write_compare_csv(const std::string& dir, const ScenarioConfig& cfg,
                       const SolverComparison& cmp);
void write_compliance_curve_csv(const std::string& dir, const ScenarioConfig& cfg,
                                std::span<const CompliancePoint> curve);

} // namespace pevsim

#endif
