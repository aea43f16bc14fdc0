#include "compliance.hpp"

#include <algorithm>
#include <cmath>

namespace pevsim {

double compliance_response(const ComplianceModel& model, double bond) {
    if (bond < 0.0) throw DomainError("bond value must be nonnegative");
    if (!(model.c0 > 0.0) || model.q0 < 0.0 || model.q0 > 1.0) {
        throw DomainError("compliance model needs q0 in [0,1] and c0 > 0");
    }
    return model.q0 + (1.0 - model.q0) * (1.0 - std::exp(-bond / model.c0));
}

ControllerState controller_step(ControllerState state, double q_measured) {
    if (q_measured < 0.0 || q_measured > 1.0) {
        throw DomainError("measured compliance must be in [0,1]");
    }
    const double error = state.q_bar - q_measured;
    const double candidate_integral = state.integral + error;
    const double raw =
        state.bond_value + state.k_p * error + state.k_i * candidate_integral;
    if (raw >= state.c_min && raw <= state.c_max) {
        state.integral = candidate_integral;
        state.bond_value = raw;
    } else {
        // saturated: clamp and freeze the integral
        state.bond_value = std::clamp(raw, state.c_min, state.c_max);
    }
    return state;
}

StationId resolve_compliance(StationId assigned, StationId nearest, double q_effective, Rng& rng) {
    if (q_effective < 0.0 || q_effective > 1.0) {
        throw DomainError("compliance probability must be in [0,1]");
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < q_effective ? assigned : nearest;
}

ComplianceEstimator::ComplianceEstimator(std::size_t window_size, double initial_estimate)
    : window_size_(std::max<std::size_t>(window_size, 1)), estimate_(initial_estimate) {}

void ComplianceEstimator::record(bool returned) {
    window_.push_back(returned);
    if (window_.size() > window_size_) window_.pop_front();
    ++total_;
    std::size_t ret = 0;
    for (bool r : window_) ret += r ? 1 : 0;
    estimate_ = static_cast<double>(ret) / static_cast<double>(window_.size());
}

} // namespace pevsim
