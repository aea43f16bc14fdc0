#ifndef PEVSIM_ENGINE_HPP
#define PEVSIM_ENGINE_HPP

#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "assignment.hpp"
#include "compliance.hpp"
#include "config.hpp"
#include "ledger.hpp"
#include "run_result.hpp"

namespace pevsim {

std::unique_ptr<Arena> build_arena(const ScenarioConfig& cfg);

// Time-stepped world: Poisson arrivals, assignment, compliance resolution,
// travel, FIFO queues, 1 s charging quanta, bond lifecycle.  One engine is one
// run; Monte Carlo replication happens above it.
class Engine {
  public:
    Engine(const ScenarioConfig& cfg, const Arena& arena, std::uint64_t run_seed);

    void step();      // advance the world by exactly 1 s
    RunResult run();  // step until the horizon and finalize

    double clock_s() const { return clock_s_; }
    // Committed + physically queued energy, the E term stations quote.
    double station_queued_kwh(StationId id) const;
    std::size_t vehicles_spawned() const { return records_.size(); }

    // Runs the full admission pipeline (assign, compliance, escrow, commit,
    // schedule travel) for an externally built vehicle; the spawn loop uses
    // this too.
    void admit_vehicle(const Vehicle& v);

  private:
    struct StationRuntime {
        Station station;
        StationSite site;
        GenerationSeries series;
        std::deque<std::pair<VehicleId, double>> queue; // (vehicle, remaining kWh)
        double queue_kwh = 0.0;     // sum of remaining energy in the queue
        double committed_kwh = 0.0; // assigned but not yet arrived (incl. phantoms)
        StationTotals totals;
    };

    struct Transit {
        VehicleId vehicle;
        StationId target;
        double arrival_s;
    };

    struct PendingPurge {
        VehicleId vehicle;
        StationId station;
        double purge_after_s; // escrow deadline
        double energy_kwh;
        std::optional<ContractId> contract;
    };

    void spawn_step();
    void process_arrivals();
    void process_purges();
    void charge_step();
    void record_event(const char* kind, VehicleId vehicle, StationId station, double value);
    void verify_queue_accounting() const;
    StationSnapshot snapshot_of(const StationRuntime& s) const;
    void settlement_observed(bool returned);
    double current_q() const;

    const ScenarioConfig& cfg_;
    const Arena& arena_;
    std::uint64_t seed_;
    double clock_s_ = 0.0;

    std::vector<StationRuntime> stations_;
    std::vector<Transit> in_transit_;
    std::vector<PendingPurge> purges_;
    std::vector<VehicleRecord> records_;
    std::vector<std::optional<ContractId>> contract_of_; // parallel to records_
    std::vector<EventRow> events_;
    std::vector<double> mean_queue_minutes_;
    std::vector<ControllerSample> controller_trace_;

    std::optional<Ledger> ledger_;
    ControllerState controller_;
    ComplianceEstimator estimator_;
    std::size_t settlements_seen_ = 0;

    Rng arrivals_rng_;
    Rng assignment_rng_;
    Rng compliance_rng_;
    VehicleId next_vehicle_id_ = 0;
};

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t run_seed);

// n_runs independent runs seeded base_seed + k, executed concurrently and
// merged by run index, so results are reproducible regardless of scheduling.
std::vector<RunResult> run_monte_carlo(const ScenarioConfig& cfg, int n_runs,
                                       std::uint64_t base_seed);

} // namespace pevsim

#endif
