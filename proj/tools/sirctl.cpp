#include "sircontrol/commands.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    std::string scenario_file;
    std::string out_dir;
    std::optional<double> step;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--scenario", args.scenario_file, "Scenario file (key = value lines)");
    cmd.add_option("--out", args.out_dir, "Output directory (default: $SIRCTL_OUT or .)");
    cmd.add_option("--step", args.step, "Override integration step (days)");
}

sir::Scenario load(const CommonArgs& args) {
    sir::Scenario scenario;
    if (!args.scenario_file.empty()) scenario = sir::load_scenario(args.scenario_file);
    if (args.step) {
        scenario.solver.step = *args.step;
        sir::validate(scenario.solver);
    }
    return scenario;
}

std::filesystem::path out_dir(const CommonArgs& args) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (const char* env = std::getenv("SIRCTL_OUT"); env && *env) return env;
    return ".";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR epidemic control: simulate, optimize, scan, figure"};
    app.require_subcommand(1);

    CommonArgs sim_args, opt_args, scan_args, fig_args;
    double opt_tol = 0.01, scan_tol = 0.01, fig_tol = 0.01;
    std::string figure_name;

    CLI::App* sim = app.add_subcommand("simulate", "Integrate a scenario and report costs");
    add_common(*sim, sim_args);

    CLI::App* opt = app.add_subcommand("optimize", "Best single lockdown for one budget pair");
    add_common(*opt, opt_args);
    opt->add_option("--tol", opt_tol, "Start-time tolerance (days)");

    CLI::App* scan = app.add_subcommand("scan", "Optimal lockdown across a budget grid");
    add_common(*scan, scan_args);
    scan->add_option("--tol", scan_tol, "Start-time tolerance (days)");

    CLI::App* fig = app.add_subcommand("figure", "Render a built-in study (fig1..fig4)");
    fig->add_option("name", figure_name, "One of fig1, fig2, fig3, fig4")->required();
    add_common(*fig, fig_args);
    fig->add_option("--tol", fig_tol, "Start-time tolerance (days)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? sir::cli::exit_ok : sir::cli::exit_validation;
    }

    try {
        if (sim->parsed()) {
            sir::cli::cmd_simulate(load(sim_args), out_dir(sim_args), std::cout);
        } else if (opt->parsed()) {
            sir::cli::cmd_optimize(load(opt_args), out_dir(opt_args), opt_tol, std::cout);
        } else if (scan->parsed()) {
            sir::cli::cmd_scan(load(scan_args), out_dir(scan_args), scan_tol, std::cout);
        } else if (fig->parsed()) {
            sir::cli::FigureOptions options;
            options.tol = fig_tol;
            sir::cli::cmd_figure(figure_name, load(fig_args), out_dir(fig_args), std::cout,
                                 options);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return sir::cli::exit_code_for(e);
    }
    return sir::cli::exit_ok;
}
