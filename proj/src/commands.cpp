#include "sircontrol/commands.hpp"

#include "sircontrol/bounds.hpp"
#include "sircontrol/format.hpp"
#include "sircontrol/optimize.hpp"
#include "sircontrol/simulate.hpp"
#include "sircontrol/svg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace sir::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot open '" + file.string() + "' for writing");
    return out;
}

// Budgets for commands that need exactly one (c1, c_inf) pair.
std::pair<double, double> single_budget(const Scenario& scenario) {
    if (!scenario.budgets)
        throw ScenarioError("this command requires budgets.c1 and budgets.c_inf");
    const Budgets& b = *scenario.budgets;
    if (b.c1.size() != 1 || b.c_inf.size() != 1)
        throw ScenarioError("this command requires a single (c1, c_inf) budget pair");
    return {b.c1.front(), b.c_inf.front()};
}

// Cumulative incidence 1 - S(t)/S(0) of a trajectory, thinned for plotting.
std::vector<std::pair<double, double>> cumulative_curve(const Trajectory& traj, double s0,
                                                        std::size_t stride) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.size() / stride + 1);
    for (std::size_t k = 0; k < traj.size(); k += stride)
        out.push_back({traj[k].t, 1.0 - traj[k].state.s / s0});
    return out;
}

std::vector<std::pair<double, double>> field_curve(const Trajectory& traj, std::size_t stride,
                                                   double TrajectoryPoint::*t_field,
                                                   double field(const TrajectoryPoint&)) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.size() / stride + 1);
    for (std::size_t k = 0; k < traj.size(); k += stride)
        out.push_back({traj[k].*t_field, field(traj[k])});
    return out;
}

std::vector<std::pair<double, double>> prevalence_curve(const Trajectory& traj,
                                                        std::size_t stride) {
    return field_curve(traj, stride, &TrajectoryPoint::t,
                       [](const TrajectoryPoint& p) { return p.state.i; });
}

std::vector<std::pair<double, double>> control_curve(const Trajectory& traj, std::size_t stride) {
    return field_curve(traj, stride, &TrajectoryPoint::t,
                       [](const TrajectoryPoint& p) { return p.u; });
}

constexpr const char* kBlue = "#1f77b4";
constexpr const char* kRed = "#d62728";
constexpr const char* kGreen = "#2ca02c";
constexpr const char* kGray = "#555555";

} // namespace

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ValidationError*>(&error)) return exit_validation;
    if (dynamic_cast<const NumericError*>(&error)) return exit_numeric;
    return 1;
}

SimulateSummary cmd_simulate(const Scenario& scenario, const fs::path& out_dir,
                             std::ostream& line_out) {
    fs::create_directories(out_dir);
    const ControlStrategy strategy = scenario.strategy.value_or(ControlStrategy{ZeroControl{}});

    const Trajectory traj = integrate(scenario.params, scenario.initial, strategy, scenario.solver);
    SimulateSummary summary;
    summary.incidence = total_incidence(scenario.params, scenario.initial, strategy, scenario.solver);
    summary.peak = peak_prevalence(traj);
    summary.cost = costs(strategy, scenario.params, scenario.initial, scenario.solver);
    summary.herd_time = herd_immunity_time(traj, scenario.params);
    summary.trajectory_csv = out_dir / "trajectory.csv";

    auto csv = open_out(summary.trajectory_csv);
    traj.write_csv(csv);

    json j;
    j["command"] = "simulate";
    j["incidence"] = summary.incidence;
    j["peak"] = summary.peak;
    j["cost_l1"] = summary.cost.l1;
    j["cost_l0"] = summary.cost.l0;
    j["cost_sup"] = summary.cost.sup;
    if (summary.herd_time)
        j["herd_immunity_time"] = *summary.herd_time;
    else
        j["herd_immunity_time"] = nullptr;
    j["trajectory_csv"] = summary.trajectory_csv.generic_string();
    line_out << j.dump() << '\n';
    return summary;
}

OptimizeSummary cmd_optimize(const Scenario& scenario, const fs::path& out_dir, double tol,
                             std::ostream& line_out) {
    fs::create_directories(out_dir);
    const auto [c1, c_inf] = single_budget(scenario);
    const OptimizationResult res = optimal_lockdown(scenario.params, scenario.initial, c1, c_inf,
                                                    tol, scenario.solver.step);

    OptimizeSummary summary;
    summary.start = res.start_time;
    summary.duration = c1 > 0.0 ? c1 / c_inf : 0.0;
    summary.level = c1 > 0.0 ? c_inf : 0.0;
    summary.incidence = res.incidence;
    summary.peak = res.peak;
    summary.evaluations = res.evaluations;
    summary.bracket = res.bracket;
    summary.strategy_file = out_dir / "optimal_strategy.scenario";

    Scenario best = scenario;
    if (c1 > 0.0)
        best.strategy = SingleLockdown{res.start_time, summary.duration, c_inf};
    else
        best.strategy = ZeroControl{};
    auto out = open_out(summary.strategy_file);
    write_scenario(out, best);

    json j;
    j["command"] = "optimize";
    j["start"] = summary.start;
    j["duration"] = summary.duration;
    j["level"] = summary.level;
    j["incidence"] = summary.incidence;
    j["peak"] = summary.peak;
    j["evaluations"] = summary.evaluations;
    j["bracket"] = summary.bracket;
    j["strategy_file"] = summary.strategy_file.generic_string();
    line_out << j.dump() << '\n';
    return summary;
}

fs::path cmd_scan(const Scenario& scenario, const fs::path& out_dir, double tol,
                  std::ostream& line_out) {
    fs::create_directories(out_dir);
    if (!scenario.budgets) throw ScenarioError("scan requires budgets.c1 and budgets.c_inf");
    const ScanResult scan = budget_level_scan(scenario.params, scenario.initial,
                                              scenario.budgets->c1, scenario.budgets->c_inf, tol,
                                              scenario.solver.step);
    const fs::path csv_path = out_dir / "scan.csv";
    auto csv = open_out(csv_path);
    scan.write_csv(csv);

    json j;
    j["command"] = "scan";
    j["rows"] = scan.rows.size();
    j["scan_csv"] = csv_path.generic_string();
    line_out << j.dump() << '\n';
    return csv_path;
}

namespace {

void figure_line(std::ostream& line_out, std::string_view name, json extra) {
    json j;
    j["command"] = "figure";
    j["figure"] = name;
    for (auto& [key, value] : extra.items()) j[key] = value;
    line_out << j.dump() << '\n';
}

void fig1(const Scenario& sc, const fs::path& out_dir, std::ostream& line_out,
          const FigureOptions& opt) {
    std::vector<double> grid = opt.fig1_c_inf;
    if (grid.empty())
        for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);

    const ScanResult scan = budget_level_scan(sc.params, sc.initial, opt.fig1_c1, grid, opt.tol,
                                              sc.solver.step);
    const fs::path csv_path = out_dir / "fig1.csv";
    auto csv = open_out(csv_path);
    scan.write_csv(csv);

    const IncidenceBounds bounds = incidence_bounds(sc.params, sc.initial);
    const char* palette[] = {kBlue, kRed, kGreen, kGray};
    svg::Panel incidence_panel{"Optimal incidence against intervention level",
                               "maximal level c_inf",
                               "total incidence",
                               {},
                               {bounds.lower, bounds.upper},
                               {},
                               {}};
    svg::Panel start_panel{
        "Optimal lockdown start against intervention level", "maximal level c_inf",
        "start time (days)", {}, {}, {}, {}};
    for (std::size_t bi = 0; bi < opt.fig1_c1.size(); ++bi) {
        const double c1 = opt.fig1_c1[bi];
        svg::Series inc{"c1 = " + format_full(c1), palette[bi % 4], {}};
        svg::Series st = inc;
        for (const ScanRow& row : scan.rows) {
            if (row.c1 != c1) continue;
            inc.points.push_back({row.c_inf, row.incidence});
            st.points.push_back({row.c_inf, row.start});
        }
        incidence_panel.series.push_back(std::move(inc));
        start_panel.series.push_back(std::move(st));
    }
    const fs::path svg_path = out_dir / "fig1.svg";
    svg::write(svg_path, {incidence_panel, start_panel});

    figure_line(line_out, "fig1",
                {{"rows", scan.rows.size()},
                 {"lower_bound", bounds.lower},
                 {"upper_bound", bounds.upper},
                 {"csv", csv_path.generic_string()},
                 {"svg", svg_path.generic_string()}});
}

void fig2(const Scenario& sc, const fs::path& out_dir, std::ostream& line_out,
          const FigureOptions& opt) {
    std::vector<double> starts;
    for (double s = 0.0; s <= opt.fig2_max_start + 1e-9; s += opt.fig2_spacing)
        starts.push_back(s);
    const auto sweep =
        start_time_sweep(sc.params, sc.initial, opt.fig2_level, opt.fig2_duration, starts,
                         sc.solver.step);

    const fs::path csv_path = out_dir / "fig2.csv";
    auto csv = open_out(csv_path);
    csv << "start,incidence\n";
    for (const SweepPoint& p : sweep)
        csv << format_full(p.start) << ',' << format_full(p.incidence) << '\n';

    const SweepPoint* best = &sweep.front();
    for (const SweepPoint& p : sweep)
        if (p.incidence < best->incidence) best = &p;

    const IncidenceBounds bounds = incidence_bounds(sc.params, sc.initial);
    svg::Series curve{"duration " + format_full(opt.fig2_duration) + " d, level " +
                          format_full(opt.fig2_level),
                      kBlue,
                      {}};
    for (const SweepPoint& p : sweep) curve.points.push_back({p.start, p.incidence});
    const fs::path svg_path = out_dir / "fig2.svg";
    svg::write(svg_path, {svg::Panel{"Total incidence against lockdown start",
                                     "lockdown start (days)",
                                     "total incidence",
                                     {curve},
                                     {bounds.lower, bounds.upper},
                                     {},
                                     {}}});

    figure_line(line_out, "fig2",
                {{"min_start", best->start},
                 {"min_incidence", best->incidence},
                 {"csv", csv_path.generic_string()},
                 {"svg", svg_path.generic_string()}});
}

void fig3(const Scenario& sc, const fs::path& out_dir, std::ostream& line_out,
          const FigureOptions& opt) {
    const double level = 0.75;
    const double step = sc.solver.step;
    const OptimizationResult best20 = optimal_lockdown(sc.params, sc.initial, 15.0, level, opt.tol, step);
    const OptimizationResult best27 =
        optimal_lockdown(sc.params, sc.initial, 27.0 * level, level, opt.tol, step);

    const SingleLockdown early{16.6, 27.0, level};
    SolverOptions run = sc.solver;
    run.horizon = 1000.0;
    const double early_incidence = total_incidence(sc.params, sc.initial, early, run);
    const double idle_incidence = 1.0 - final_size(sc.params, sc.initial) / sc.initial.s;

    const fs::path csv_path = out_dir / "fig3.csv";
    auto csv = open_out(csv_path);
    csv << "label,start,duration,level,incidence\n";
    csv << "optimal_20d," << format_full(best20.start_time) << ",20," << format_full(level) << ','
        << format_full(best20.incidence) << '\n';
    csv << "early_27d," << format_full(early.start) << ",27," << format_full(level) << ','
        << format_full(early_incidence) << '\n';
    csv << "optimal_27d," << format_full(best27.start_time) << ",27," << format_full(level) << ','
        << format_full(best27.incidence) << '\n';
    csv << "uncontrolled,,,," << format_full(idle_incidence) << '\n';

    const double plot_horizon = 120.0;
    SolverOptions window = sc.solver;
    window.horizon = plot_horizon;
    window.extinction_threshold = 0.0;
    const SingleLockdown opt20{best20.start_time, 20.0, level};
    const Trajectory t_opt = integrate(sc.params, sc.initial, opt20, window);
    const Trajectory t_early = integrate(sc.params, sc.initial, early, window);
    const Trajectory t_idle = integrate(sc.params, sc.initial, ZeroControl{}, window);

    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.1 / step)));
    const fs::path series_path = out_dir / "fig3_timeseries.csv";
    auto series = open_out(series_path);
    series << "t,optimal_20d,early_27d,uncontrolled\n";
    const std::size_t n = std::min({t_opt.size(), t_early.size(), t_idle.size()});
    for (std::size_t k = 0; k < n; k += stride) {
        const double s0 = sc.initial.s;
        series << format_full(t_opt[k].t) << ',' << format_full(1.0 - t_opt[k].state.s / s0) << ','
               << format_full(1.0 - t_early[k].state.s / s0) << ','
               << format_full(1.0 - t_idle[k].state.s / s0) << '\n';
    }

    const fs::path svg_path = out_dir / "fig3.svg";
    svg::write(svg_path,
               {svg::Panel{"Cumulative incidence: optimal vs early lockdown",
                           "time (days)",
                           "share ever infected",
                           {svg::Series{"optimal 20 d (start " + format_full(best20.start_time) + ")",
                                        kBlue, cumulative_curve(t_opt, sc.initial.s, stride)},
                            svg::Series{"early 27 d (start 16.6)", kRed,
                                        cumulative_curve(t_early, sc.initial.s, stride)},
                            svg::Series{"uncontrolled", kGray,
                                        cumulative_curve(t_idle, sc.initial.s, stride)}},
                           {},
                           {},
                           {}}});

    figure_line(line_out, "fig3",
                {{"optimal_start", best20.start_time},
                 {"optimal_incidence", best20.incidence},
                 {"early_incidence", early_incidence},
                 {"optimal_27d_start", best27.start_time},
                 {"optimal_27d_incidence", best27.incidence},
                 {"csv", csv_path.generic_string()},
                 {"svg", svg_path.generic_string()}});
}

void fig4(const Scenario& sc, const fs::path& out_dir, std::ostream& line_out,
          const FigureOptions& opt) {
    const double step = sc.solver.step;
    const OptimizationResult best = optimal_lockdown(sc.params, sc.initial, 15.0, 0.75, opt.tol, step);
    const SingleLockdown lockdown{best.start_time, 20.0, 0.75};
    const PeakMinResult calib = calibrate_peak_min(sc.params, sc.initial, 15.0, opt.tol, step);
    const MaintainFeedback hold = peak_min_strategy(calib);

    SolverOptions window = sc.solver;
    window.horizon = 120.0;
    window.extinction_threshold = 0.0;
    const Trajectory t_lock = integrate(sc.params, sc.initial, lockdown, window);
    const Trajectory t_hold = integrate(sc.params, sc.initial, hold, window);
    const Trajectory t_idle = integrate(sc.params, sc.initial, ZeroControl{}, window);

    SolverOptions full = sc.solver;
    full.horizon = 1000.0;
    const double idle_incidence = 1.0 - final_size(sc.params, sc.initial) / sc.initial.s;
    const double idle_peak = peak_prevalence(integrate(sc.params, sc.initial, ZeroControl{}, full));
    const double hold_incidence = calib.incidence;

    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.1 / step)));
    const fs::path csv_path = out_dir / "fig4.csv";
    auto csv = open_out(csv_path);
    csv << "t,I_lockdown,I_hold,I_none,C_lockdown,C_hold,C_none,u_lockdown,u_hold\n";
    const std::size_t n = std::min({t_lock.size(), t_hold.size(), t_idle.size()});
    const double s0 = sc.initial.s;
    for (std::size_t k = 0; k < n; k += stride) {
        csv << format_full(t_lock[k].t) << ',' << format_full(t_lock[k].state.i) << ','
            << format_full(t_hold[k].state.i) << ',' << format_full(t_idle[k].state.i) << ','
            << format_full(1.0 - t_lock[k].state.s / s0) << ','
            << format_full(1.0 - t_hold[k].state.s / s0) << ','
            << format_full(1.0 - t_idle[k].state.s / s0) << ',' << format_full(t_lock[k].u) << ','
            << format_full(t_hold[k].u) << '\n';
    }

    const fs::path svg_path = out_dir / "fig4.svg";
    svg::write(
        svg_path,
        {svg::Panel{"Infectious share",
                    "time (days)",
                    "prevalence",
                    {svg::Series{"optimal lockdown", kBlue, prevalence_curve(t_lock, stride)},
                     svg::Series{"peak-holding feedback", kRed, prevalence_curve(t_hold, stride)},
                     svg::Series{"no intervention", kGray, prevalence_curve(t_idle, stride)}},
                    {},
                    {},
                    {}},
         svg::Panel{"Cumulative incidence",
                    "time (days)",
                    "share ever infected",
                    {svg::Series{"optimal lockdown", kBlue,
                                 cumulative_curve(t_lock, sc.initial.s, stride)},
                     svg::Series{"peak-holding feedback", kRed,
                                 cumulative_curve(t_hold, sc.initial.s, stride)},
                     svg::Series{"no intervention", kGray,
                                 cumulative_curve(t_idle, sc.initial.s, stride)}},
                    {},
                    {},
                    {}},
         svg::Panel{"Control level",
                    "time (days)",
                    "u(t)",
                    {svg::Series{"optimal lockdown", kBlue, control_curve(t_lock, stride)},
                     svg::Series{"peak-holding feedback", kRed, control_curve(t_hold, stride)}},
                    {},
                    {},
                    {}}});

    figure_line(line_out, "fig4",
                {{"lockdown",
                  {{"start", best.start_time},
                   {"duration", 20.0},
                   {"peak", best.peak},
                   {"incidence", best.incidence}}},
                 {"hold",
                  {{"start", calib.start},
                   {"duration", calib.duration},
                   {"peak", calib.peak},
                   {"incidence", hold_incidence}}},
                 {"uncontrolled", {{"peak", idle_peak}, {"incidence", idle_incidence}}},
                 {"csv", csv_path.generic_string()},
                 {"svg", svg_path.generic_string()}});
}

} // namespace

void cmd_figure(std::string_view name, const Scenario& scenario, const fs::path& out_dir,
                std::ostream& line_out, const FigureOptions& options) {
    fs::create_directories(out_dir);
    if (name == "fig1")
        fig1(scenario, out_dir, line_out, options);
    else if (name == "fig2")
        fig2(scenario, out_dir, line_out, options);
    else if (name == "fig3")
        fig3(scenario, out_dir, line_out, options);
    else if (name == "fig4")
        fig4(scenario, out_dir, line_out, options);
    else
        throw InvalidParams("unknown figure '" + std::string(name) +
                            "' (expected fig1, fig2, fig3 or fig4)");
}

} // namespace sir::cli
