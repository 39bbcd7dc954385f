#pragma once

#include "sircontrol/model.hpp"
#include "sircontrol/trajectory.hpp"

#include <optional>

namespace sir {

// Universal envelope for the total incidence of the controlled epidemic:
// no admissible intervention of bounded cost can push 1 - S_u(inf)/S(0)
// below `lower` (herd immunity must be reached eventually) and none can do
// worse than doing nothing, which gives `upper`.
struct IncidenceBounds {
    double lower; // max(0, 1 - gamma / (beta S(0)))
    double upper; // 1 - S_0(inf) / S(0), uncontrolled final size
};

IncidenceBounds incidence_bounds(const EpidemicParams& params, const EpidemicState& initial);

// First time the susceptible share falls to gamma/beta, linearly interpolated
// between samples; nullopt if the trajectory never gets there.
std::optional<double> herd_immunity_time(const Trajectory& trajectory,
                                         const EpidemicParams& params);

// A-priori cap on the herd-immunity time of any control with l1 cost
// `l1_cost`:  l1 + log(beta S(0) / gamma) / (beta I(0)) * exp(gamma l1).
double herd_immunity_time_bound(const EpidemicParams& params, const EpidemicState& initial,
                                double l1_cost);

} // namespace sir
