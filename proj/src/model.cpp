#include "sircontrol/model.hpp"

#include <cmath>
#include <sstream>

namespace sir {

namespace {

bool finite(double x) { return std::isfinite(x); }

[[noreturn]] void fail_params(const std::string& what) {
    throw InvalidParams("invalid epidemic parameters: " + what);
}

[[noreturn]] void fail_state(const std::string& what) {
    throw InvalidState("invalid epidemic state: " + what);
}

} // namespace

EpidemicParams::EpidemicParams(double beta_, double gamma_) : beta(beta_), gamma(gamma_) {
    if (!finite(beta) || beta <= 0.0) fail_params("beta must be finite and > 0");
    if (!finite(gamma) || gamma <= 0.0) fail_params("gamma must be finite and > 0");
}

EpidemicState::EpidemicState(double s_, double i_, double r_) : s(s_), i(i_), r(r_) {
    if (!finite(s) || !finite(i) || !finite(r)) fail_state("non-finite component");
    // absorb harmless roundoff from arithmetic like 1 - s - i
    constexpr double slack = 1e-12;
    if (s < 0.0 && s > -slack) s = 0.0;
    if (i < 0.0 && i > -slack) i = 0.0;
    if (r < 0.0 && r > -slack) r = 0.0;
    if (s < 0.0 || i < 0.0 || r < 0.0) fail_state("negative compartment share");
    if (s + i + r > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "compartment shares sum to " << s + i + r << " > 1";
        fail_state(msg.str());
    }
}

EpidemicState::EpidemicState(double s_, double i_) : EpidemicState(s_, i_, 1.0 - s_ - i_) {}

void validate(const SolverOptions& options) {
    if (!finite(options.step) || options.step <= 0.0)
        throw InvalidOptions("solver step must be finite and > 0");
    if (!finite(options.horizon) || options.horizon <= 0.0)
        throw InvalidOptions("solver horizon must be finite and > 0");
    if (!finite(options.extinction_threshold) || options.extinction_threshold < 0.0 ||
        options.extinction_threshold >= 1.0)
        throw InvalidOptions("extinction threshold must lie in [0, 1)");
}

} // namespace sir
