#include "sircontrol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sir {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// State extended by the accumulated control cost w(t) = integral of u, which
// drives the budget stopping rule of MaintainFeedback.
struct Aug {
    double s, i, r, w;
};

Aug operator+(const Aug& a, const Aug& b) { return {a.s + b.s, a.i + b.i, a.r + b.r, a.w + b.w}; }
Aug operator*(double c, const Aug& a) { return {c * a.s, c * a.i, c * a.r, c * a.w}; }

double maintain_level(const EpidemicParams& p, double s, double clamp) {
    if (s <= p.herd_threshold()) return 0.0;
    return std::min(clamp, 1.0 - p.gamma / (p.beta * s));
}

// Mutable integration-time view of a strategy.  Piecewise-constant kinds pick
// their branch from a hint time (the midpoint of the current substep), so a
// stage evaluation landing exactly on a switch never reads the wrong side.
// Dynamic events (budget exhaustion, threshold crossing) are detected from a
// sign change of margin() across a substep and recorded as a hard cutoff.
class ControlSession {
public:
    ControlSession(const ControlStrategy& control, const EpidemicParams& params)
        : control_(control), params_(params) {
        has_events_ = std::holds_alternative<ReffThreshold>(control) ||
                      (std::holds_alternative<MaintainFeedback>(control) &&
                       std::isfinite(std::get<MaintainFeedback>(control).budget));
    }

    bool has_events() const { return has_events_; }
    double cutoff() const { return cutoff_; }
    void set_cutoff(double t) { cutoff_ = std::min(cutoff_, t); }

    std::vector<double> breakpoints(double t_max) const {
        std::vector<double> ts;
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                    ts.assign(c.knots.begin(), c.knots.end());
                } else if constexpr (std::is_same_v<T, SingleLockdown>) {
                    ts = {c.start, c.start + c.duration};
                } else if constexpr (std::is_same_v<T, MaintainFeedback>) {
                    ts = {c.start, c.end_time};
                } else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) {
                    ts = {c.t1, c.t2, c.t3};
                } else if constexpr (std::is_same_v<T, ReffThreshold>) {
                    ts = {c.end_time};
                }
            },
            control_);
        std::erase_if(ts, [&](double t) { return t <= 0.0 || t >= t_max; });
        std::sort(ts.begin(), ts.end());
        return ts;
    }

    double level(double hint, const Aug& y) const {
        if (hint >= cutoff_) return 0.0;
        return std::visit(
            [&](const auto& c) -> double {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, ZeroControl>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                    auto it = std::lower_bound(c.knots.begin(), c.knots.end(), hint);
                    if (it == c.knots.begin() || it == c.knots.end()) return 0.0;
                    return c.levels[static_cast<std::size_t>(it - c.knots.begin()) - 1];
                } else if constexpr (std::is_same_v<T, SingleLockdown>) {
                    return (hint > c.start && hint <= c.start + c.duration) ? c.level : 0.0;
                } else if constexpr (std::is_same_v<T, MaintainFeedback>) {
                    if (hint <= c.start || hint > c.end_time) return 0.0;
                    return maintain_level(params_, y.s, c.clamp);
                } else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) {
                    if (hint > c.t1 && hint <= c.t2) return maintain_level(params_, y.s, 1.0);
                    if (hint > c.t2 && hint <= c.t3) return 1.0;
                    return 0.0;
                } else {
                    static_assert(std::is_same_v<T, ReffThreshold>);
                    return (hint >= 0.0 && hint <= c.end_time) ? c.level : 0.0;
                }
            },
            control_);
    }

    // Positive while the current phase persists; a crossing to <= 0 is the
    // moment the control must shut off.
    double margin(const Aug& y) const {
        if (const auto* m = std::get_if<MaintainFeedback>(&control_)) return m->budget - y.w;
        if (const auto* rt = std::get_if<ReffThreshold>(&control_))
            return (1.0 - rt->level) * params_.beta * y.s / params_.gamma - rt->threshold;
        return kInf;
    }

private:
    const ControlStrategy& control_;
    const EpidemicParams& params_;
    bool has_events_ = false;
    double cutoff_ = kInf;
};

template <class Level>
Aug rk4_step(const EpidemicParams& p, const Aug& y, double t, double h, Level&& level) {
    auto deriv = [&](double tt, const Aug& yy) -> Aug {
        const double u = level(tt, yy);
        const double new_infections = (1.0 - u) * p.beta * yy.s * yy.i;
        const double recoveries = p.gamma * yy.i;
        return {-new_infections, new_infections - recoveries, recoveries, u};
    };
    const Aug k1 = deriv(t, y);
    const Aug k2 = deriv(t + 0.5 * h, y + (0.5 * h) * k1);
    const Aug k3 = deriv(t + 0.5 * h, y + (0.5 * h) * k2);
    const Aug k4 = deriv(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance across (a, b], a substep free of declared switch times.  If the
// session's event margin changes sign inside, the crossing is located by
// bisection on the step length and the remainder is integrated with the
// control off.
void advance_substep(const EpidemicParams& p, ControlSession& session, double a, double b,
                     Aug& y) {
    const double hint = 0.5 * (a + b);
    auto lvl = [&](double, const Aug& yy) { return session.level(hint, yy); };

    if (session.has_events() && session.cutoff() > b && session.margin(y) <= 0.0)
        session.set_cutoff(a);

    Aug y1 = rk4_step(p, y, a, b - a, lvl);
    if (session.has_events() && session.cutoff() > b && session.margin(y) > 0.0 &&
        session.margin(y1) <= 0.0) {
        double lo = 0.0, hi = b - a;
        Aug y_hi = y1;
        for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Aug ym = rk4_step(p, y, a, mid, lvl);
            if (session.margin(ym) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
                y_hi = ym;
            }
        }
        session.set_cutoff(a + hi);
        y = y_hi;
        const double rest = b - (a + hi);
        if (rest > 1e-15) {
            auto off = [&](double, const Aug& yy) { return session.level(0.5 * (a + hi + b), yy); };
            y = rk4_step(p, y, a + hi, rest, off);
        }
        return;
    }
    y = y1;
}

} // namespace

Trajectory integrate(const EpidemicParams& params, const EpidemicState& initial,
                     const ControlStrategy& control, const SolverOptions& options) {
    validate(control);
    validate(options);

    const double step = options.step;
    const auto n_steps =
        static_cast<std::size_t>(std::max(0.0, std::floor(options.horizon / step + 1e-9)));
    const double support = support_end(control);

    ControlSession session(control, params);
    Aug y{initial.s, initial.i, initial.r, 0.0};
    if (session.has_events() && session.margin(y) <= 0.0) session.set_cutoff(0.0);

    const std::vector<double> breaks = session.breakpoints(n_steps * step);
    auto next_break = breaks.begin();

    std::vector<TrajectoryPoint> points;
    points.reserve(n_steps + 1);
    points.push_back({0.0, initial, session.level(0.0, y)});

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t0 = static_cast<double>(k) * step;
        const double t1 = static_cast<double>(k + 1) * step;

        while (next_break != breaks.end() && *next_break <= t0 + 1e-12) ++next_break;
        double a = t0;
        while (next_break != breaks.end() && *next_break < t1 - 1e-12) {
            if (*next_break > a + 1e-15) {
                advance_substep(params, session, a, *next_break, y);
                a = *next_break;
            }
            ++next_break;
        }
        advance_substep(params, session, a, t1, y);

        // A state this far off the simplex can only come from a step too
        // large for the dynamics, not from roundoff.
        const bool finite = std::isfinite(y.s) && std::isfinite(y.i) && std::isfinite(y.r);
        if (!finite || y.s < -1e-9 || y.i < -1e-9 || y.s + y.i + y.r > 2.0)
            throw IntegrationDiverged("state left the simplex at t = " + std::to_string(t1) +
                                      "; reduce the step");

        points.push_back({t1, EpidemicState(y.s, y.i, y.r), session.level(t1, y)});

        if (y.i < options.extinction_threshold &&
            (t1 >= support - 1e-9 || session.cutoff() <= t1))
            break;
    }
    return Trajectory(step, std::move(points));
}

double vulnerability(const EpidemicParams& params, const EpidemicState& state) {
    if (state.s <= 0.0) throw InvalidState("vulnerability requires S > 0");
    return state.s + state.i - std::log(state.s) / params.r0();
}

double invert_special(double rho, double y) {
    if (!std::isfinite(rho) || rho <= 0.0) throw InvalidParams("rho must be finite and > 0");
    if (!std::isfinite(y)) throw InvalidParams("target value must be finite");

    const double x_max = 1.0 / rho;
    const double y_min = (1.0 + std::log(rho)) / rho;
    auto f = [rho](double x) { return x - std::log(x) / rho; };

    if (y < y_min) {
        // absorb roundoff from callers that evaluated f near its minimum
        if (y > y_min - 1e-12 * std::max(1.0, std::abs(y_min))) return x_max;
        throw BelowMinimum("no solution: value below the range minimum of x - log(x)/rho");
    }

    double lo = x_max;
    while (f(lo) < y) lo *= 0.5;
    double hi = x_max;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double final_size(const EpidemicParams& params, const EpidemicState& state) {
    if (state.s <= 0.0) throw InvalidState("final_size requires S > 0");
    if (state.i < 0.0) throw InvalidState("final_size requires I >= 0");
    if (state.i == 0.0) return state.s; // disease-free: nothing left to happen
    return invert_special(params.r0(), vulnerability(params, state));
}

double total_incidence(const EpidemicParams& params, const EpidemicState& initial,
                       const ControlStrategy& control, const SolverOptions& options) {
    validate(control);
    validate(options);
    const double support = support_end(control);
    if (support > options.horizon + 1e-9)
        throw HorizonTooShort("control support ends at " + std::to_string(support) +
                              " but horizon is " + std::to_string(options.horizon));

    EpidemicState terminal = initial;
    if (support > 0.0) {
        SolverOptions run = options;
        run.horizon = std::ceil(support / options.step - 1e-9) * options.step;
        terminal = integrate(params, initial, control, run).back().state;
    }
    return 1.0 - final_size(params, terminal) / initial.s;
}

} // namespace sir
