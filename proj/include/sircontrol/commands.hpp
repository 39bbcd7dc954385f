#pragma once

#include "sircontrol/control.hpp"
#include "sircontrol/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace sir::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2; // parse or validation error
inline constexpr int exit_numeric = 3;    // numeric failure

int exit_code_for(const std::exception& error);

// Each command writes its artifacts under out_dir and prints one structured
// summary line (JSON) to line_out.

struct SimulateSummary {
    double incidence;
    double peak;
    CostReport cost;
    std::optional<double> herd_time;
    std::filesystem::path trajectory_csv;
};

SimulateSummary cmd_simulate(const Scenario& scenario, const std::filesystem::path& out_dir,
                             std::ostream& line_out);

// Requires budgets with a single (c1, c_inf) pair; writes the optimal strategy
// as a runnable scenario file.
struct OptimizeSummary {
    double start;
    double duration;
    double level;
    double incidence;
    double peak;
    int evaluations;
    double bracket;
    std::filesystem::path strategy_file;
};

OptimizeSummary cmd_optimize(const Scenario& scenario, const std::filesystem::path& out_dir,
                             double tol, std::ostream& line_out);

// Requires budgets; runs the full (c1, c_inf) grid and writes scan.csv.
std::filesystem::path cmd_scan(const Scenario& scenario, const std::filesystem::path& out_dir,
                               double tol, std::ostream& line_out);

// Built-in studies rendered as CSV + SVG:
//   fig1  optimal incidence and start time across budget levels
//   fig2  incidence against lockdown start for a fixed budget
//   fig3  cost of starting a lockdown too early
//   fig4  optimal lockdown vs peak-holding feedback vs no intervention
struct FigureOptions {
    std::vector<double> fig1_c1{7.5, 15.0, 30.0};
    std::vector<double> fig1_c_inf; // empty: 0.05, 0.10, ..., 1.00
    double fig2_level = 0.75;
    double fig2_duration = 20.0;
    double fig2_max_start = 50.0;
    double fig2_spacing = 0.1;
    double tol = 0.01;
};

void cmd_figure(std::string_view name, const Scenario& scenario,
                const std::filesystem::path& out_dir, std::ostream& line_out,
                const FigureOptions& options = {});

} // namespace sir::cli
