#pragma once

#include "sircontrol/control.hpp"
#include "sircontrol/trajectory.hpp"

namespace sir {

// Classical fixed-step RK4 over [0, options.horizon], sampled at multiples of
// options.step.  Steps are split exactly at control discontinuities (declared
// switch times as well as budget/threshold events located at run time), so
// reported incidences do not depend on how switch times sit on the grid.
// Stops early once the infectious share falls below the extinction threshold
// and the control cannot become active again.
Trajectory integrate(const EpidemicParams& params, const EpidemicState& initial,
                     const ControlStrategy& control, const SolverOptions& options);

// V(S, I) = S + I - (gamma/beta) log S.  Constant along uncontrolled
// trajectories; under constant control c the related quantity
// (1-c)(S+I) - (gamma/beta) log S is conserved instead.
double vulnerability(const EpidemicParams& params, const EpidemicState& state);

// Inverse of f(x) = x - log(x)/rho on its decreasing branch (0, 1/rho]:
// the unique x there with f(x) = y.  f attains its minimum
// y0 = (1 + log rho)/rho at x = 1/rho; y below y0 throws BelowMinimum.
// Bisection to absolute tolerance 1e-12.
double invert_special(double rho, double y);

// Susceptible share S(infinity) left by the uncontrolled epidemic started at
// `state`, from the conservation law
//   S_inf - (gamma/beta) log S_inf = S + I - (gamma/beta) log S.
// For I = 0 nothing happens and S is returned as-is.
double final_size(const EpidemicParams& params, const EpidemicState& state);

// Share of the initially susceptible population ever infected,
// 1 - S(infinity)/S(0): integrates while the control can act, then applies
// final_size to the terminal state instead of chasing the tail of the ODE.
double total_incidence(const EpidemicParams& params, const EpidemicState& initial,
                       const ControlStrategy& control, const SolverOptions& options);

} // namespace sir
