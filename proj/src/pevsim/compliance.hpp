#ifndef PEVSIM_COMPLIANCE_HPP
#define PEVSIM_COMPLIANCE_HPP

#include <deque>

#include "domain.hpp"

namespace pevsim {

// Driver response to the bond value: q(C) = q0 + (1 - q0)(1 - exp(-C/c0)).
// Strictly increasing, q(0) = q0, q(inf) -> 1.
struct ComplianceModel {
    double q0 = 0.4; // base compliance with no bond at stake
    double c0 = 5.0; // bond value reaching ~63% of the headroom
};

double compliance_response(const ComplianceModel& model, double bond);

// Discrete PI controller regulating the bond value C toward the compliance
// target q_bar, with clamping and anti-windup (integral frozen while C
// saturates).
struct ControllerState {
    double bond_value = 5.0; // C
    double q_bar = 0.9;
    double k_p = 20.0;
    double k_i = 2.0;
    double integral = 0.0;
    double c_min = 0.0;
    double c_max = 50.0;
};

ControllerState controller_step(ControllerState state, double q_measured);

// Bernoulli compliance draw: assigned station with probability q, otherwise
// the nearest one.
StationId resolve_compliance(StationId assigned, StationId nearest, double q_effective, Rng& rng);

// returned / (returned + forfeited) over the most recent window_size
// settlements; keeps the previous estimate while the window is empty.
class ComplianceEstimator {
  public:
    ComplianceEstimator(std::size_t window_size, double initial_estimate);

    void record(bool returned);
    double estimate() const { return estimate_; }
    std::size_t observed() const { return total_; }

  private:
    std::size_t window_size_;
    std::deque<bool> window_;
    double estimate_;
    std::size_t total_ = 0;
};

} // namespace pevsim

#endif
