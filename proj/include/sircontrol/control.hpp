#pragma once

#include "sircontrol/model.hpp"

#include <limits>
#include <variant>
#include <vector>

namespace sir {

// Intervention strategies u(t) with values in [0, 1], where u is the factor
// by which transmission is reduced: effective transmission rate (1-u) beta.
// All kinds have bounded support so that costs and final sizes exist.
//
// Piecewise-constant kinds use the convention u = level on (a, b]; feedback
// kinds are evaluated against the concurrently integrated state.

// u identically zero.
struct ZeroControl {};

// u = levels[k] on (knots[k], knots[k+1]], zero outside (knots.front(), knots.back()].
struct PiecewiseConstant {
    std::vector<double> knots;  // strictly increasing, size = levels.size() + 1
    std::vector<double> levels; // each in [0, 1]
};

// u = level on (start, start + duration], zero elsewhere.
struct SingleLockdown {
    double start;
    double duration;
    double level; // in (0, 1]
};

// u = min(clamp, max(0, 1 - gamma/(beta S))) on (start, end_time]; this holds
// the infectious share constant while S remains above gamma/beta and turns
// itself off once S falls below it.  Integration additionally stops the
// control once its accumulated cost reaches `budget` (infinity: no cap).
// end_time must be finite: it is the hard stop that bounds the support.
struct MaintainFeedback {
    double start;
    double end_time;
    double budget = std::numeric_limits<double>::infinity();
    double clamp = 1.0;
};

// Zero on [0, t1], maintain feedback on (t1, t2], full suppression u = 1 on
// (t2, t3], zero afterwards.
struct WaitMaintainSuppressRelax {
    double t1;
    double t2;
    double t3;
};

// Heuristic: u = level while (1-level) beta S / gamma > threshold and
// t <= end_time, zero otherwise.  Since S never increases the control
// switches off at most once.
struct ReffThreshold {
    double level; // in (0, 1]
    double threshold;
    double end_time;
};

using ControlStrategy = std::variant<ZeroControl, PiecewiseConstant, SingleLockdown,
                                     MaintainFeedback, WaitMaintainSuppressRelax, ReffThreshold>;

// Throws InvalidControl unless levels lie in [0, 1], times are ordered and
// nonnegative, and the support is bounded.
void validate(const ControlStrategy& control);

// Earliest time after which u is guaranteed zero (the realized support may
// end sooner for feedback kinds).
double support_end(const ControlStrategy& control);

// Static upper bound on the level the strategy can attain.
double max_level_bound(const ControlStrategy& control);

// Control level at (t, state).  Pure; feedback kinds apply their formula
// whenever t lies in their active window (the budget stopping rule of
// MaintainFeedback is applied during integration, not here).
double evaluate(const ControlStrategy& control, const EpidemicParams& params, double t,
                const EpidemicState& state);

// Cost functionals of a strategy: l1 = integral of u, l0 = measure of
// {u > 0}, sup = largest attained level.  Exact for piecewise-constant
// kinds; feedback kinds are integrated and measured on the sample grid.
struct CostReport {
    double l1;
    double l0;
    double sup;
};

CostReport costs(const ControlStrategy& control, const EpidemicParams& params,
                 const EpidemicState& initial, const SolverOptions& options);

// Bang-bang requantization: chop [0, ...] into windows of length `wavelength`;
// inside each window the output is zero and then `amplitude`, timed so the
// window's integral of u is preserved exactly.  Input support must lie within
// [0, support_bound] and its sup level must not exceed `amplitude`.
ControlStrategy quantize(const ControlStrategy& control, double amplitude, double wavelength,
                         double support_bound);

// Same, for feedback kinds: the control is first realized along its own
// trajectory and window integrals are taken by adaptive quadrature.
ControlStrategy quantize(const ControlStrategy& control, double amplitude, double wavelength,
                         double support_bound, const EpidemicParams& params,
                         const EpidemicState& initial, const SolverOptions& options);

} // namespace sir
