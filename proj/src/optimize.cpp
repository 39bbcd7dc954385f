#include "sircontrol/optimize.hpp"

#include "sircontrol/bounds.hpp"
#include "sircontrol/format.hpp"
#include "sircontrol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sir {

namespace {

void check_budgets(double c1, double c_inf) {
    if (!std::isfinite(c1) || c1 < 0.0) throw InvalidParams("budget c1 must be finite and >= 0");
    if (!std::isfinite(c_inf) || c_inf <= 0.0 || c_inf > 1.0)
        throw InvalidParams("budget c_inf must lie in (0, 1]");
}

void check_search(double tol, double step) {
    if (!std::isfinite(tol) || tol <= 0.0) throw InvalidParams("tolerance must be > 0");
    if (!std::isfinite(step) || step <= 0.0) throw InvalidParams("step must be > 0");
}

double incidence_for_start(const EpidemicParams& params, const EpidemicState& initial,
                           double start, double duration, double level, double step) {
    const SingleLockdown lockdown{start, duration, level};
    SolverOptions options;
    options.step = step;
    options.horizon = start + duration + 1.0;
    return total_incidence(params, initial, lockdown, options);
}

double uncontrolled_incidence(const EpidemicParams& params, const EpidemicState& initial) {
    return 1.0 - final_size(params, initial) / initial.s;
}

double peak_under(const EpidemicParams& params, const EpidemicState& initial,
                  const ControlStrategy& control, double step) {
    SolverOptions options;
    options.step = step;
    return peak_prevalence(integrate(params, initial, control, options));
}

// Herd-immunity time of the uncontrolled epidemic, used to cap the search
// window: past it plus the lockdown duration (plus slack) incidence is flat
// at the uncontrolled value.
double uncontrolled_herd_time(const EpidemicParams& params, const EpidemicState& initial,
                              double step) {
    if (initial.s <= params.herd_threshold()) return 0.0;
    SolverOptions options;
    options.step = step;
    const Trajectory traj = integrate(params, initial, ZeroControl{}, options);
    const auto t_h = herd_immunity_time(traj, params);
    return t_h ? *t_h : options.horizon;
}

struct GoldenResult {
    double x;
    double fx;
    double width;
};

// Golden-section minimization of a unimodal f over [a, b]; also folds in an
// externally known candidate (x0, f0) so the best evaluated point wins.
template <class F>
GoldenResult golden_min(F&& f, double a, double b, double tol, double x0, double f0) {
    constexpr double inv_phi = 0.6180339887498949;
    double best_x = x0, best_f = f0;
    auto consider = [&](double x, double fx) {
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    };
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    consider(x1, f1);
    consider(x2, f2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            consider(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            consider(x2, f2);
        }
    }
    return {best_x, best_f, b - a};
}

} // namespace

OptimizationResult optimal_lockdown(const EpidemicParams& params, const EpidemicState& initial,
                                    double c1, double c_inf, double tol, double step) {
    check_budgets(c1, c_inf);
    check_search(tol, step);
    if (params.r0() <= 1.0)
        throw NoOutbreak("r0 <= 1: incidence cannot be improved by timing an intervention");

    if (c1 == 0.0) {
        const double incidence = uncontrolled_incidence(params, initial);
        const double peak = peak_under(params, initial, ZeroControl{}, step);
        return {0.0, incidence, peak, 1, 0.0};
    }

    const double duration = c1 / c_inf;
    int evaluations = 0;
    auto objective = [&](double start) {
        ++evaluations;
        return incidence_for_start(params, initial, start, duration, c_inf, step);
    };

    const double t_herd = uncontrolled_herd_time(params, initial, step);
    const double start_max = t_herd + duration + 50.0;

    // coarse pass on a 1-day grid, then golden-section inside the bracket
    double best_x = 0.0, best_f = objective(0.0);
    for (double s = 1.0; s <= start_max; s += 1.0) {
        const double fs = objective(s);
        if (fs < best_f) {
            best_f = fs;
            best_x = s;
        }
    }
    const double lo = std::max(0.0, best_x - 1.0);
    const double hi = std::min(start_max, best_x + 1.0);
    const GoldenResult refined = golden_min(objective, lo, hi, tol, best_x, best_f);

    const SingleLockdown strategy{refined.x, duration, c_inf};
    const double peak = peak_under(params, initial, strategy, step);
    return {refined.x, refined.fx, peak, evaluations, refined.width};
}

std::vector<SweepPoint> start_time_sweep(const EpidemicParams& params,
                                         const EpidemicState& initial, double level,
                                         double duration, std::span<const double> starts,
                                         double step) {
    if (!std::isfinite(level) || level <= 0.0 || level > 1.0)
        throw InvalidParams("sweep level must lie in (0, 1]");
    if (!std::isfinite(duration) || duration < 0.0)
        throw InvalidParams("sweep duration must be >= 0");
    check_search(1.0, step);

    std::vector<SweepPoint> out;
    out.reserve(starts.size());
    const double idle = duration == 0.0 ? uncontrolled_incidence(params, initial) : 0.0;
    for (double s : starts) {
        if (!std::isfinite(s) || s < 0.0) throw InvalidParams("sweep starts must be >= 0");
        out.push_back(
            {s, duration == 0.0 ? idle : incidence_for_start(params, initial, s, duration, level, step)});
    }
    return out;
}

void ScanResult::write_csv(std::ostream& out) const {
    out << "c1,c_inf,start,incidence\n";
    for (const ScanRow& row : rows) {
        out << format_full(row.c1) << ',' << format_full(row.c_inf) << ','
            << format_full(row.start) << ',' << format_full(row.incidence) << '\n';
    }
}

ScanResult budget_level_scan(const EpidemicParams& params, const EpidemicState& initial,
                             std::span<const double> c1_list, std::span<const double> c_inf_grid,
                             double tol, double step) {
    ScanResult scan;
    scan.rows.reserve(c1_list.size() * c_inf_grid.size());
    for (double c1 : c1_list) {
        for (double c_inf : c_inf_grid) {
            const OptimizationResult res = optimal_lockdown(params, initial, c1, c_inf, tol, step);
            scan.rows.push_back({c1, c_inf, res.start_time, res.incidence});
        }
    }
    return scan;
}

PeakMinResult calibrate_peak_min(const EpidemicParams& params, const EpidemicState& initial,
                                 double c1, double tol, double step) {
    check_search(tol, step);
    if (!std::isfinite(c1) || c1 <= 0.0) throw InvalidParams("budget c1 must be finite and > 0");
    if (params.r0() * initial.s <= 1.0)
        throw NoOutbreak("effective reproduction number at t = 0 is <= 1: no peak to flatten");
    if (initial.i <= 0.0) throw InvalidState("calibration requires I(0) > 0");

    const double threshold = params.herd_threshold();

    // One uncontrolled run; prevalence rises monotonically until S = gamma/beta.
    SolverOptions options;
    options.step = step;
    const Trajectory base = integrate(params, initial, ZeroControl{}, options);
    const double peak_unc = peak_prevalence(base);

    // Wait phase: refine the first crossing of prevalence level p with partial
    // RK4 steps from the last sample below it.
    auto crossing = [&](double p) -> std::pair<double, double> { // (t1, S at t1)
        if (p <= initial.i) return {0.0, initial.s};
        std::size_t k = 1;
        while (k < base.size() && base[k].state.i < p) ++k;
        const auto& a = base[k - 1];
        auto state_after = [&](double h) {
            SolverOptions sub;
            sub.step = h;
            sub.horizon = h;
            return integrate(params, a.state, ZeroControl{}, sub).back().state;
        };
        double lo = 0.0, hi = base[k].t - a.t;
        EpidemicState at_hi = base[k].state;
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const EpidemicState sm = state_after(mid);
            if (sm.i < p) {
                lo = mid;
            } else {
                hi = mid;
                at_hi = sm;
            }
        }
        return {a.t + hi, at_hi.s};
    };

    // Maintain phase in closed form: with I held at p, S falls linearly at
    // rate gamma p from S1 to gamma/beta, and the control integral is
    // D - log(beta S1 / gamma) / (beta p).
    auto budget_spent = [&](double p) {
        const auto [t1, s1] = crossing(p);
        const double d = (s1 - threshold) / (params.gamma * p);
        return d - std::log(params.beta * s1 / params.gamma) / (params.beta * p);
    };

    double p_lo = initial.i, p_hi = peak_unc;
    if (budget_spent(p_lo) < c1 - tol)
        throw BudgetInfeasible("budget " + format_full(c1) +
                               " cannot be spent: even p = I(0) costs less");

    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (p_lo + p_hi);
        if (budget_spent(mid) > c1)
            p_lo = mid;
        else
            p_hi = mid;
    }
    const double p = 0.5 * (p_lo + p_hi);

    const auto [t1, s1] = crossing(p);
    const double duration = (s1 - threshold) / (params.gamma * p);
    const double incidence =
        1.0 - final_size(params, EpidemicState(threshold, p)) / initial.s;
    return {t1, duration, p, incidence};
}

MaintainFeedback peak_min_strategy(const PeakMinResult& calibrated) {
    MaintainFeedback strategy;
    strategy.start = calibrated.start;
    strategy.end_time = calibrated.start + calibrated.duration;
    return strategy;
}

} // namespace sir
