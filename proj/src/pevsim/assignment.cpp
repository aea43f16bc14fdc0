#include "assignment.hpp"

#include <cmath>

namespace pevsim {

CostBreakdown evaluate_station_cost(const VehicleBroadcast& v, const StationSnapshot& s,
                                    const TravelEstimate& travel, const SimParams& params) {
    const double queue_drain_s = s.queued_energy_kwh / params.charge_rate_kwh_per_s;
    const double start_s = s.now_s + std::max(travel.travel_time_s, queue_drain_s);
    const double charge_s = v.request_kwh / params.charge_rate_kwh_per_s;
    const double res_kwh = s.res_energy_kwh ? s.res_energy_kwh(start_s, start_s + charge_s) : 0.0;
    return aggregate_cost(v.weights, v.request_kwh, s.queued_energy_kwh, res_kwh, travel, params);
}

namespace {

struct Evaluated {
    std::vector<CostBreakdown> costs;
};

Evaluated evaluate_all(const VehicleBroadcast& v, std::span<const StationSnapshot> stations,
                       std::span<const TravelEstimate> travels, const SimParams& params) {
    if (stations.empty()) throw NoStations("no stations available");
    if (stations.size() != travels.size()) {
        throw DomainError("stations and travel estimates must align");
    }
    Evaluated e;
    e.costs.reserve(stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i) {
        e.costs.push_back(evaluate_station_cost(v, stations[i], travels[i], params));
    }
    return e;
}

// Same-step ties go to the nearest station, then to the smaller id.
bool closer(const StationSnapshot& a, const TravelEstimate& ta, const StationSnapshot& b,
            const TravelEstimate& tb) {
    if (ta.distance != tb.distance) return ta.distance < tb.distance;
    return a.id < b.id;
}

} // namespace

AssignmentOutcome centralized_assign(VehicleId vehicle, const VehicleBroadcast& v,
                                     std::span<const StationSnapshot> stations,
                                     std::span<const TravelEstimate> travels,
                                     const SimParams& params) {
    const auto [costs] = evaluate_all(v, stations, travels, params);
    std::size_t best = 0;
    for (std::size_t i = 1; i < stations.size(); ++i) {
        if (costs[i].aggregate < costs[best].aggregate ||
            (costs[i].aggregate == costs[best].aggregate &&
             closer(stations[i], travels[i], stations[best], travels[best]))) {
            best = i;
        }
    }
    return AssignmentOutcome{vehicle, stations[best].id, 0, costs[best], travels[best]};
}

double green_signal_probability(const CostBreakdown& cost) {
    if (cost.aggregate < 0.0) throw DomainError("aggregate cost must be nonnegative");
    return std::pow(10.0, -cost.aggregate);
}

AssignmentOutcome decentralized_assign(VehicleId vehicle, const VehicleBroadcast& v,
                                       std::span<const StationSnapshot> stations,
                                       std::span<const TravelEstimate> travels,
                                       const SimParams& params, Rng& rng, int step_cap) {
    const auto [costs] = evaluate_all(v, stations, travels, params);

    std::vector<double> p(stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i) p[i] = green_signal_probability(costs[i]);

    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int step = 1; step <= step_cap; ++step) {
        int winner = -1;
        for (std::size_t i = 0; i < stations.size(); ++i) {
            if (u(rng) >= p[i]) continue; // no signal from station i this step
            if (winner < 0 || closer(stations[i], travels[i], stations[winner],
                                     travels[winner])) {
                winner = static_cast<int>(i);
            }
        }
        if (winner >= 0) {
            return AssignmentOutcome{vehicle, stations[winner].id, step - 1, costs[winner],
                                     travels[winner]};
        }
    }
    throw StepLimitExceeded("no green signal within " + std::to_string(step_cap) + " steps");
}

} // namespace pevsim
