#ifndef PEVSIM_RUN_RESULT_HPP
#define PEVSIM_RUN_RESULT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "domain.hpp"

namespace pevsim {

struct VehicleRecord {
    VehicleId id = 0;
    double spawn_s = 0.0;
    std::array<double, 3> alpha{1.0, 0.0, 0.0};
    double request_kwh = 0.0;
    StationId assigned_station = -1;
    StationId actual_station = -1;
    bool defected = false;
    bool admitted = true; // false when the bond could not be posted
    int wait_steps = 0;
    double assign_distance = 0.0; // to the assigned station, at request time
    double travel_time_s = 0.0;   // to the actual target
    double arrival_s = -1.0;
    double charge_start_s = -1.0;
    double charge_end_s = -1.0;
    bool completed = false;
    double price_eur = 0.0;     // locked at assignment (forecast = realized)
    double res_used_kwh = 0.0;  // renewable share of the request
};

struct StationTotals {
    StationId id = 0;
    long assignments = 0;
    long completions = 0;
    double energy_delivered_kwh = 0.0;
    double renewable_generated_kwh = 0.0;
    long forfeits = 0;
};

struct ControllerSample {
    double t_s = 0.0;
    double q_estimate = 0.0;
    double bond_value = 0.0;
};

struct EventRow {
    double t_s = 0.0;
    std::string kind;
    VehicleId vehicle = 0;
    StationId station = -1;
    double value = 0.0;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<VehicleRecord> vehicles;
    std::vector<StationTotals> stations;
    // Per-step mean queue-drain time over all stations (minutes), the
    // system-level series used for solver comparisons.
    std::vector<double> mean_queue_minutes;
    std::vector<ControllerSample> controller;
    std::vector<EventRow> events;
    std::string ledger_dump; // empty when the ledger is disabled
};

} // namespace pevsim

#endif
