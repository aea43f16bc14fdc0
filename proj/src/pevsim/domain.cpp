#include "domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pevsim {

bool Position::finite() const { return std::isfinite(x) && std::isfinite(y); }

PreferenceWeights::PreferenceWeights(double time, double price, double dist)
    : alpha_time_(time), alpha_price_(price), alpha_dist_(dist) {
    if (!(time >= 0.0) || !(price >= 0.0) || !(dist >= 0.0)) {
        std::ostringstream os;
        os << "weights must be nonnegative, got (" << time << ", " << price << ", " << dist << ")";
        throw NonConvexWeights(os.str());
    }
    const double sum = time + price + dist;
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "weights must sum to 1, got sum " << sum;
        throw NonConvexWeights(os.str());
    }
}

PreferenceWeights validate_weights(const PreferenceWeights& w) {
    // Construction already validated; re-run the checks so callers can use
    // this on tuples built via aggregate tricks too.
    return PreferenceWeights(w.alpha_time(), w.alpha_price(), w.alpha_dist());
}

EnergyRequest make_energy_request(double amount_kwh, double max_kwh) {
    if (!(amount_kwh > 0.0) || amount_kwh > max_kwh) {
        std::ostringstream os;
        os << "energy request " << amount_kwh << " kWh outside (0, " << max_kwh << "]";
        throw DomainError(os.str());
    }
    return EnergyRequest{amount_kwh};
}

EnergyRequest sample_energy_request(Rng& rng, double mean_kwh, double std_kwh, double min_kwh,
                                    double max_kwh) {
    if (!(min_kwh > 0.0) || !(max_kwh > min_kwh)) {
        throw DomainError("energy sampling needs 0 < min < max");
    }
    if (std_kwh == 0.0) {
        return EnergyRequest{std::clamp(mean_kwh, min_kwh, max_kwh)};
    }
    std::normal_distribution<double> dist(mean_kwh, std_kwh);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double draw = dist(rng);
        if (draw >= min_kwh && draw <= max_kwh) return EnergyRequest{draw};
    }
    // Unreachable for any sane (mean, std) vs. range; clamp as a last resort.
    return EnergyRequest{std::clamp(mean_kwh, min_kwh, max_kwh)};
}

std::string to_string(RenewableKind k) {
    switch (k) {
        case RenewableKind::none: return "none";
        case RenewableKind::pv: return "pv";
        case RenewableKind::wind: return "wind";
    }
    return "none";
}

RenewableKind renewable_kind_from_string(const std::string& s) {
    if (s == "none") return RenewableKind::none;
    if (s == "pv") return RenewableKind::pv;
    if (s == "wind") return RenewableKind::wind;
    throw ConfigError("unknown renewable kind '" + s + "'");
}

GenerationSeries::GenerationSeries(std::vector<double> power_kw_by_second)
    : power_kw_(std::move(power_kw_by_second)) {
    cum_kwh_.resize(power_kw_.size() + 1, 0.0);
    for (std::size_t t = 0; t < power_kw_.size(); ++t) {
        cum_kwh_[t + 1] = cum_kwh_[t] + power_kw_[t] / 3600.0;
    }
}

double GenerationSeries::energy_kwh(double from_s, double to_s) const {
    if (cum_kwh_.empty() || to_s <= from_s) return 0.0;
    const double len = static_cast<double>(power_kw_.size());
    const auto cum_at = [&](double t) {
        t = std::clamp(t, 0.0, len);
        const auto lo = static_cast<std::size_t>(t);
        if (static_cast<double>(lo) == t || lo + 1 >= cum_kwh_.size()) return cum_kwh_[lo];
        const double frac = t - static_cast<double>(lo);
        return cum_kwh_[lo] + frac * (cum_kwh_[lo + 1] - cum_kwh_[lo]);
    };
    return cum_at(to_s) - cum_at(from_s);
}

double GenerationSeries::total_energy_kwh() const {
    return cum_kwh_.empty() ? 0.0 : cum_kwh_.back();
}

double GenerationSeries::power_kw(double t_s) const {
    if (t_s < 0.0 || power_kw_.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(t_s);
    return idx < power_kw_.size() ? power_kw_[idx] : 0.0;
}

GenerationSeries realize_generation(const RenewableProfile& profile, double table_len_s,
                                    double daylight_start_s, double daylight_end_s, Rng& wind_rng) {
    const auto len = static_cast<std::size_t>(std::max(0.0, table_len_s));
    std::vector<double> kw(len, 0.0);
    switch (profile.kind) {
        case RenewableKind::none:
            break;
        case RenewableKind::pv: {
            const double span = daylight_end_s - daylight_start_s;
            if (span > 0.0) {
                for (std::size_t t = 0; t < len; ++t) {
                    const double phase = (static_cast<double>(t) - daylight_start_s) / span;
                    if (phase >= 0.0 && phase <= 1.0) {
                        kw[t] = profile.nominal_power_kw * std::sin(std::numbers::pi * phase);
                    }
                }
            }
            break;
        }
        case RenewableKind::wind: {
            // 60 s segments, step sd 10% of nominal, clamped to [0, nominal].
            std::normal_distribution<double> step(0.0, 0.1 * profile.nominal_power_kw);
            double level = 0.5 * profile.nominal_power_kw;
            for (std::size_t t = 0; t < len; ++t) {
                if (t % 60 == 0 && t > 0) {
                    level = std::clamp(level + step(wind_rng), 0.0, profile.nominal_power_kw);
                }
                kw[t] = level;
            }
            break;
        }
    }
    return GenerationSeries(std::move(kw));
}

void SimParams::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError(std::string("sim parameter ") + name + " must be strictly positive");
        }
    };
    positive(charge_rate_kwh_per_s, "charge_rate_kwh_per_s");
    positive(m_max_s, "m_max_s");
    positive(d_max, "d_max");
    positive(vehicle_speed, "vehicle_speed");
    positive(horizon_s, "horizon_s");
    if (!(arrival_rate_per_s >= 0.0) || !std::isfinite(arrival_rate_per_s)) {
        throw DomainError("sim parameter arrival_rate_per_s must be nonnegative");
    }
}

} // namespace pevsim
