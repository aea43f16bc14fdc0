#ifndef PEVSIM_ASSIGNMENT_HPP
#define PEVSIM_ASSIGNMENT_HPP

#include <functional>
#include <span>
#include <vector>

#include "cost.hpp"
#include "domain.hpp"
#include "mobility.hpp"

namespace pevsim {

// What a vehicle broadcasts when it requests charging: position, preferences,
// energy demand.  Nothing else about the vehicle is visible to stations.
struct VehicleBroadcast {
    Position position;
    int node = -1;
    PreferenceWeights weights{1.0, 0.0, 0.0};
    double request_kwh = 0.0;
};

// One station's own knowledge at evaluation time.  Snapshots carry no view of
// any other station, so a station evaluator physically cannot read a
// competitor's queue or renewable data.
struct StationSnapshot {
    StationId id = 0;
    Position position;
    int node = -1;
    double tariff_eur_per_kwh = 0.45;
    double queued_energy_kwh = 0.0;
    double now_s = 0.0;
    // Own renewable forecast: energy (kWh) this station expects over [from, to).
    std::function<double(double from_s, double to_s)> res_energy_kwh;
};

// Cost of serving the broadcast vehicle, computed from the station's own state
// only.  The forecast window starts when the vehicle would plausibly start
// charging (after travel and after the current queue drains) and spans its
// charge duration.
CostBreakdown evaluate_station_cost(const VehicleBroadcast& v, const StationSnapshot& s,
                                    const TravelEstimate& travel, const SimParams& params);

struct AssignmentOutcome {
    VehicleId vehicle_id = 0;
    StationId station_id = 0;
    int wait_steps = 0; // protocol steps before the first green signal
    CostBreakdown cost_at_assignment;
    TravelEstimate travel;
};

inline constexpr int kDefaultSignalStepCap = 10000;

// Deterministic benchmark: argmin of the aggregate cost, ties broken by
// smaller distance, then smaller station id.
AssignmentOutcome centralized_assign(VehicleId vehicle, const VehicleBroadcast& v,
                                     std::span<const StationSnapshot> stations,
                                     std::span<const TravelEstimate> travels,
                                     const SimParams& params);

// p = 10^(-F), in (0, 1] for F >= 0.
double green_signal_probability(const CostBreakdown& cost);

// Stochastic protocol: each station independently emits a green signal per
// step with probability 10^(-F); the vehicle takes the first signal, nearest
// station on same-step ties.  Costs are computed once, before the loop.
AssignmentOutcome decentralized_assign(VehicleId vehicle, const VehicleBroadcast& v,
                                       std::span<const StationSnapshot> stations,
                                       std::span<const TravelEstimate> travels,
                                       const SimParams& params, Rng& rng,
                                       int step_cap = kDefaultSignalStepCap);

} // namespace pevsim

#endif
