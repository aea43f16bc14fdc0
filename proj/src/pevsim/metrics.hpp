#ifndef PEVSIM_METRICS_HPP
#define PEVSIM_METRICS_HPP

#include <map>
#include <span>
#include <vector>

#include "config.hpp"
#include "run_result.hpp"

namespace pevsim {

// i_ct: mean charging time in minutes over completed vehicles (spawn to charge
// end), averaged across runs.  Throws EmptyRun when nothing completed.
double index_charging_time(std::span<const RunResult> results);

// i_ep: tariff * (E_charged - E_RE) / E_charged over completed vehicles,
// averaged across runs.  Throws ZeroEnergy when nothing charged.
double index_energy_price(std::span<const RunResult> results, double tariff);

// i_d: mean assignment-time distance over all assigned vehicles and runs.
double index_distance(std::span<const RunResult> results);

// Per-station share of assignments across all runs; fractions sum to 1.
std::map<StationId, double> participation_factors(std::span<const RunResult> results);

// Shannon entropy (nats) of a participation vector.
double participation_entropy(const std::map<StationId, double>& participation);

// Spearman rank correlation; average ranks on ties.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

struct IndexSummary {
    double i_ct_minutes = 0.0;
    double i_ep_eur_per_kwh = 0.0;
    double i_d = 0.0;
    double i_ct_stderr = 0.0;
    long completed = 0;
    long spawned = 0;
    double mean_wait_steps = 0.0;
};

IndexSummary summarize(std::span<const RunResult> results, double tariff);

struct SolverComparison {
    double rmse_minutes = 0.0;     // between the two mean-queue time series
    double centralized_i_ct = 0.0; // minutes
    double decentralized_i_ct = 0.0;
    double ratio = 0.0; // decentralized / centralized
    std::vector<double> centralized_series;
    std::vector<double> decentralized_series;
};

// Same scenario, same arrival seeds, both solvers.
SolverComparison compare_solvers(const ScenarioConfig& cfg, int n_runs, std::uint64_t base_seed);

struct SweepPoint {
    std::array<double, 3> alpha{};
    IndexSummary indices;
};

// Evaluates the indices on the full 0.1-step convex grid (66 points).
std::vector<SweepPoint> weight_sweep(const ScenarioConfig& cfg, int n_runs,
                                     std::uint64_t base_seed);

struct CompliancePoint {
    double q = 0.0;
    double i_ct_minutes = 0.0;
    double i_ct_stderr = 0.0;
    int n_runs = 0;
};

std::vector<CompliancePoint> compliance_curve(const ScenarioConfig& cfg,
                                              std::span<const double> q_grid, int n_runs,
                                              std::uint64_t base_seed);

} // namespace pevsim

#endif
