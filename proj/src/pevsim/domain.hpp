#ifndef PEVSIM_DOMAIN_HPP
#define PEVSIM_DOMAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace pevsim {

using VehicleId = std::uint64_t;
using StationId = int;

inline constexpr double kDefaultMaxRequestKwh = 8.0;

struct Position {
    double x = 0.0;
    double y = 0.0;
    bool finite() const;
};

// Convex preference tuple (time, price, distance).  The constructor is the
// single validation point: nonnegative entries summing to 1 within 1e-9.
class PreferenceWeights {
  public:
    PreferenceWeights(double time, double price, double dist);

    double alpha_time() const { return alpha_time_; }
    double alpha_price() const { return alpha_price_; }
    double alpha_dist() const { return alpha_dist_; }

    bool operator==(const PreferenceWeights&) const = default;

  private:
    double alpha_time_;
    double alpha_price_;
    double alpha_dist_;
};

PreferenceWeights validate_weights(const PreferenceWeights& w);

struct EnergyRequest {
    double amount_kwh = 0.0;
};

EnergyRequest make_energy_request(double amount_kwh, double max_kwh = kDefaultMaxRequestKwh);

// Gaussian draw truncated by resampling into [min_kwh, max_kwh].  std == 0
// degenerates to the (clamped) mean.
EnergyRequest sample_energy_request(Rng& rng, double mean_kwh, double std_kwh, double min_kwh,
                                    double max_kwh);

enum class RenewableKind { none, pv, wind };

std::string to_string(RenewableKind k);
RenewableKind renewable_kind_from_string(const std::string& s);

struct RenewableProfile {
    RenewableKind kind = RenewableKind::none;
    double nominal_power_kw = 0.0;
};

// Realized generation of one station over a horizon, at 1 s resolution.
// Forecasts are read from the same table (perfect foresight), so the price a
// vehicle is quoted at assignment time is the price it pays.
class GenerationSeries {
  public:
    GenerationSeries() = default;
    GenerationSeries(std::vector<double> power_kw_by_second);

    // Energy (kWh) generated over [from_s, to_s); clamped to the table domain,
    // zero outside it.  Fractional endpoints interpolate linearly.
    double energy_kwh(double from_s, double to_s) const;
    double total_energy_kwh() const;
    double power_kw(double t_s) const;
    std::size_t length_s() const { return power_kw_.size(); }

  private:
    std::vector<double> power_kw_;
    std::vector<double> cum_kwh_; // cum_kwh_[t] = energy generated in [0, t)
};

// PV: half-sine over the daylight window.  Wind: bounded random walk updated
// every 60 s.  Both scaled to the profile's nominal power.
GenerationSeries realize_generation(const RenewableProfile& profile, double table_len_s,
                                    double daylight_start_s, double daylight_end_s, Rng& wind_rng);

struct Station {
    StationId id = 0;
    Position position;
    int node = -1; // road-graph node index, -1 in unit-square mode
    RenewableProfile renewable;
    double tariff_eur_per_kwh = 0.45;
    std::string account_id;
};

struct Vehicle {
    VehicleId id = 0;
    Position position;
    int node = -1;
    EnergyRequest request;
    PreferenceWeights weights{1.0, 0.0, 0.0};
    double spawn_time_s = 0.0;
    bool compliant_draw = true;
};

struct SimParams {
    double charge_rate_kwh_per_s = 0.0061; // e_r: 22 kW plug
    double m_max_s = 3600.0;               // charging-time normalization
    double d_max = 1.0;                    // distance normalization
    double vehicle_speed = 0.02;           // length units per second
    double arrival_rate_per_s = 500.0 / 25200.0;
    double horizon_s = 25200.0;

    void validate() const; // throws DomainError if any field is not positive
};

} // namespace pevsim

#endif
