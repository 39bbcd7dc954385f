#pragma once

#include "sircontrol/errors.hpp"

namespace sir {

// Parameters of the SIR model
//   S' = -(1-u) beta S I,  I' = (1-u) beta S I - gamma I,  R' = gamma I
// with compartments expressed as population shares and time in days.
struct EpidemicParams {
    double beta;  // transmission rate per day
    double gamma; // recovery rate per day

    EpidemicParams(double beta_, double gamma_);

    double r0() const { return beta / gamma; }
    // Susceptible share below which infections decline without intervention.
    double herd_threshold() const { return gamma / beta; }
};

// A point of the S/I/R simplex.  r is carried redundantly so states stay
// self-contained; the two-argument constructor fills r = 1 - s - i.
struct EpidemicState {
    double s;
    double i;
    double r;

    EpidemicState(double s_, double i_, double r_);
    EpidemicState(double s_, double i_);
};

struct SolverOptions {
    double step = 0.01;                  // RK4 step and sampling interval, days
    double horizon = 1000.0;             // last day that may be simulated
    double extinction_threshold = 1e-12; // infectious share treated as extinct
};

void validate(const SolverOptions& options);

} // namespace sir
