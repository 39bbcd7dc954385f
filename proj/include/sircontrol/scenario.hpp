#pragma once

#include "sircontrol/control.hpp"
#include "sircontrol/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace sir {

// A scenario file is a flat list of `key = value` lines (# comments, blank
// lines allowed).  Every key is optional; missing model keys fall back to the
// built-in defaults below.  Recognized keys:
//
//   beta, gamma, s0, i0           model parameters and initial state
//   step, horizon,                solver controls
//   extinction_threshold
//   strategy.kind                 zero | piecewise_constant | single_lockdown |
//                                 maintain_feedback | wait_maintain_suppress_relax |
//                                 reff_threshold
//   strategy.*                    kind-specific fields (see parser)
//   budgets.c1, budgets.c_inf     comma-separated lists; used by optimize/scan
struct Budgets {
    std::vector<double> c1;
    std::vector<double> c_inf;
};

struct Scenario {
    EpidemicParams params{0.6, 0.2};
    EpidemicState initial{0.9999, 0.0001};
    SolverOptions solver{};
    std::optional<ControlStrategy> strategy;
    std::optional<Budgets> budgets;
};

// Throws ScenarioError with file:line context for syntax problems; value
// errors surface as the library's usual validation errors.
Scenario parse_scenario(std::istream& in, std::string_view name = "<scenario>");
Scenario load_scenario(const std::filesystem::path& file);

// Inverse of parsing: full precision, re-parseable.
void write_scenario(std::ostream& out, const Scenario& scenario);

} // namespace sir
