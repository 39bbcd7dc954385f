#pragma once

#include "sircontrol/control.hpp"
#include "sircontrol/model.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace sir {

// Under budgets ||u||_1 <= c1 and ||u||_inf <= c_inf the incidence-optimal
// strategy is the single lockdown at full level c_inf and full duration
// c1/c_inf; only its start time remains to be found.  optimal_lockdown
// minimizes total incidence over the start time with a 1-day coarse grid
// followed by golden-section refinement.
struct OptimizationResult {
    double start_time;
    double incidence;
    double peak;     // peak prevalence under the returned strategy
    int evaluations; // incidence evaluations spent
    double bracket;  // width of the final search interval
};

OptimizationResult optimal_lockdown(const EpidemicParams& params, const EpidemicState& initial,
                                    double c1, double c_inf, double tol = 0.01,
                                    double step = 0.01);

// Incidence as a function of lockdown start, for fixed level and duration.
struct SweepPoint {
    double start;
    double incidence;
};

std::vector<SweepPoint> start_time_sweep(const EpidemicParams& params,
                                         const EpidemicState& initial, double level,
                                         double duration, std::span<const double> starts,
                                         double step = 0.01);

// optimal_lockdown over a grid of budget pairs; rows keyed by (c1, c_inf).
struct ScanRow {
    double c1;
    double c_inf;
    double start;
    double incidence;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    // Columns c1,c_inf,start,incidence; full double precision.
    void write_csv(std::ostream& out) const;
};

ScanResult budget_level_scan(const EpidemicParams& params, const EpidemicState& initial,
                             std::span<const double> c1_list, std::span<const double> c_inf_grid,
                             double tol = 0.01, double step = 0.01);

// Peak-minimizing wait-maintain-relax strategy spending exactly the budget:
// wait until prevalence reaches p, hold it there via u = 1 - gamma/(beta S)
// until S reaches gamma/beta, then relax.  p is calibrated by bisection so
// the l1 cost equals c1 (to within tol).
struct PeakMinResult {
    double start;    // day prevalence first reaches p
    double duration; // length of the maintain phase
    double peak;     // the maintained level p
    double incidence;
};

PeakMinResult calibrate_peak_min(const EpidemicParams& params, const EpidemicState& initial,
                                 double c1, double tol = 0.01, double step = 0.01);

// The strategy object realizing a calibration result.
MaintainFeedback peak_min_strategy(const PeakMinResult& calibrated);

} // namespace sir
