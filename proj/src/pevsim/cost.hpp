#ifndef PEVSIM_COST_HPP
#define PEVSIM_COST_HPP

#include "domain.hpp"
#include "mobility.hpp"

namespace pevsim {

// The three normalized components and their weighted aggregate for one
// (vehicle, station) pair.
struct CostBreakdown {
    double t_component = 0.0;
    double p_component = 0.0;
    double d_component = 0.0;
    double aggregate = 0.0;
};

// ((queued + request)/e_r + travel) / M_max.  The queue term counts the
// requesting vehicle's own energy; the result may exceed 1 when queues are
// long — M_max normalizes, it does not bound.
double time_component(double queued_energy_kwh, double request_kwh, double travel_time_s,
                      const SimParams& params);

// tariff * max(request - res_forecast, 0), in euro.
double price_eur(double request_kwh, double res_forecast_kwh, double tariff_eur_per_kwh);

// max(request - res_forecast, 0) / request, in [0, 1].
double price_component(double request_kwh, double res_forecast_kwh);

// dist / d_max.
double distance_component(double dist, double d_max);

CostBreakdown aggregate_cost(const PreferenceWeights& w, double t_component, double p_component,
                             double d_component);

// Full pair evaluation from station-local inputs.
CostBreakdown aggregate_cost(const PreferenceWeights& w, double request_kwh,
                             double queued_energy_kwh, double res_forecast_kwh,
                             const TravelEstimate& travel, const SimParams& params);

} // namespace pevsim

#endif
