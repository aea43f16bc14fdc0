#include "cost.hpp"

#include <algorithm>

namespace pevsim {

double time_component(double queued_energy_kwh, double request_kwh, double travel_time_s,
                      const SimParams& params) {
    if (queued_energy_kwh < 0.0 || request_kwh < 0.0 || travel_time_s < 0.0) {
        throw DomainError("time_component inputs must be nonnegative");
    }
    return ((queued_energy_kwh + request_kwh) / params.charge_rate_kwh_per_s + travel_time_s) /
           params.m_max_s;
}

double price_eur(double request_kwh, double res_forecast_kwh, double tariff_eur_per_kwh) {
    if (request_kwh < 0.0 || res_forecast_kwh < 0.0 || tariff_eur_per_kwh < 0.0) {
        throw DomainError("price inputs must be nonnegative");
    }
    return tariff_eur_per_kwh * std::max(request_kwh - res_forecast_kwh, 0.0);
}

double price_component(double request_kwh, double res_forecast_kwh) {
    if (request_kwh == 0.0) throw ZeroRequest("price_component needs request > 0");
    if (request_kwh < 0.0 || res_forecast_kwh < 0.0) {
        throw DomainError("price inputs must be nonnegative");
    }
    return std::max(request_kwh - res_forecast_kwh, 0.0) / request_kwh;
}

double distance_component(double dist, double d_max) {
    if (dist < 0.0) throw DomainError("distance must be nonnegative");
    if (!(d_max > 0.0)) throw DomainError("d_max must be positive");
    return dist / d_max;
}

CostBreakdown aggregate_cost(const PreferenceWeights& w, double t_component, double p_component,
                             double d_component) {
    CostBreakdown c;
    c.t_component = t_component;
    c.p_component = p_component;
    c.d_component = d_component;
    c.aggregate = w.alpha_time() * t_component + w.alpha_price() * p_component +
                  w.alpha_dist() * d_component;
    return c;
}

CostBreakdown aggregate_cost(const PreferenceWeights& w, double request_kwh,
                             double queued_energy_kwh, double res_forecast_kwh,
                             const TravelEstimate& travel, const SimParams& params) {
    return aggregate_cost(w,
                          time_component(queued_energy_kwh, request_kwh, travel.travel_time_s, params),
                          price_component(request_kwh, res_forecast_kwh),
                          distance_component(travel.distance, params.d_max));
}

} // namespace pevsim
