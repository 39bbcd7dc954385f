#include "sircontrol/control.hpp"

#include "sircontrol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sir {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InvalidControl("invalid control: " + what); }

bool level_ok(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

// Integral of the control over (a, b] for kinds with closed-form pieces.
double window_integral(const PiecewiseConstant& c, double a, double b) {
    double total = 0.0;
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
        const double lo = std::max(a, c.knots[k]);
        const double hi = std::min(b, c.knots[k + 1]);
        if (hi > lo) total += c.levels[k] * (hi - lo);
    }
    return total;
}

double window_integral(const SingleLockdown& c, double a, double b) {
    const double lo = std::max(a, c.start);
    const double hi = std::min(b, c.start + c.duration);
    return hi > lo ? c.level * (hi - lo) : 0.0;
}

// Sampled realization of a feedback control along its own trajectory.
struct Realized {
    std::vector<double> t;
    std::vector<double> u;
};

Realized realize(const ControlStrategy& control, const EpidemicParams& params,
                 const EpidemicState& initial, const SolverOptions& options) {
    const double support = support_end(control);
    if (support > options.horizon + 1e-9)
        throw HorizonTooShort("control support ends at " + std::to_string(support) +
                              " but horizon is " + std::to_string(options.horizon));
    SolverOptions run = options;
    run.horizon = std::max(options.step, std::ceil(support / options.step - 1e-9) * options.step);
    const Trajectory traj = integrate(params, initial, control, run);
    Realized r;
    r.t.reserve(traj.size());
    r.u.reserve(traj.size());
    for (const auto& p : traj.points()) {
        r.t.push_back(p.t);
        r.u.push_back(p.u);
    }
    return r;
}

// Integral of the piecewise-linear interpolant of (t, u) over (a, b].
double window_integral(const Realized& r, double a, double b) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < r.t.size(); ++k) {
        const double lo = std::max(a, r.t[k]);
        const double hi = std::min(b, r.t[k + 1]);
        if (hi <= lo) continue;
        const double dt = r.t[k + 1] - r.t[k];
        auto at = [&](double x) {
            const double w = (x - r.t[k]) / dt;
            return (1.0 - w) * r.u[k] + w * r.u[k + 1];
        };
        total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    return total;
}

template <class Integrand>
ControlStrategy quantize_windows(Integrand&& integral_over, double amplitude, double wavelength,
                                 double support_bound) {
    const auto n_windows =
        static_cast<std::size_t>(std::ceil(support_bound / wavelength - 1e-9));
    PiecewiseConstant out;
    for (std::size_t k = 1; k <= n_windows; ++k) {
        const double w_end = static_cast<double>(k) * wavelength;
        const double w_start = w_end - wavelength;
        double tau = integral_over(w_start, w_end) / amplitude;
        tau = std::clamp(tau, 0.0, wavelength);
        if (tau <= wavelength * 1e-15) continue;
        const double on_start = w_end - tau;
        if (out.knots.empty()) {
            out.knots.push_back(on_start);
        } else if (on_start > out.knots.back() + 1e-12) {
            out.levels.push_back(0.0); // explicit gap between pulses
            out.knots.push_back(on_start);
        } // otherwise contiguous: the previous pulse already ends here
        out.levels.push_back(amplitude);
        out.knots.push_back(w_end);
    }
    if (out.levels.empty()) return ZeroControl{};
    return out;
}

} // namespace

void validate(const ControlStrategy& control) {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ZeroControl>) {
                return;
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                if (c.levels.empty()) fail("piecewise-constant control needs at least one piece");
                if (c.knots.size() != c.levels.size() + 1)
                    fail("piecewise-constant control needs one more knot than levels");
                if (!std::isfinite(c.knots.front()) || c.knots.front() < 0.0)
                    fail("knots must start at a finite time >= 0");
                for (std::size_t k = 0; k + 1 < c.knots.size(); ++k)
                    if (!(c.knots[k + 1] > c.knots[k]) || !std::isfinite(c.knots[k + 1]))
                        fail("knots must be finite and strictly increasing");
                for (double v : c.levels)
                    if (!level_ok(v)) fail("levels must lie in [0, 1]");
            } else if constexpr (std::is_same_v<T, SingleLockdown>) {
                if (!std::isfinite(c.start) || c.start < 0.0) fail("lockdown start must be >= 0");
                if (!std::isfinite(c.duration) || c.duration <= 0.0)
                    fail("lockdown duration must be > 0");
                if (!level_ok(c.level) || c.level == 0.0) fail("lockdown level must lie in (0, 1]");
            } else if constexpr (std::is_same_v<T, MaintainFeedback>) {
                if (!std::isfinite(c.start) || c.start < 0.0) fail("maintain start must be >= 0");
                if (!std::isfinite(c.end_time) || c.end_time <= c.start)
                    fail("maintain needs a finite end time after its start");
                if (std::isnan(c.budget) || c.budget <= 0.0)
                    fail("maintain budget must be > 0 (infinity: no cap)");
                if (!level_ok(c.clamp)) fail("maintain clamp must lie in [0, 1]");
            } else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) {
                if (!std::isfinite(c.t1) || c.t1 < 0.0) fail("t1 must be >= 0");
                if (!std::isfinite(c.t2) || !std::isfinite(c.t3) || !(c.t1 < c.t2 && c.t2 < c.t3))
                    fail("phase times must satisfy t1 < t2 < t3 and be finite");
            } else {
                static_assert(std::is_same_v<T, ReffThreshold>);
                if (!level_ok(c.level) || c.level == 0.0) fail("level must lie in (0, 1]");
                if (!std::isfinite(c.threshold) || c.threshold < 0.0)
                    fail("threshold must be finite and >= 0");
                if (!std::isfinite(c.end_time) || c.end_time <= 0.0)
                    fail("a finite end time > 0 is required");
            }
        },
        control);
}

double support_end(const ControlStrategy& control) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ZeroControl>) return 0.0;
            else if constexpr (std::is_same_v<T, PiecewiseConstant>) return c.knots.back();
            else if constexpr (std::is_same_v<T, SingleLockdown>) return c.start + c.duration;
            else if constexpr (std::is_same_v<T, MaintainFeedback>) return c.end_time;
            else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) return c.t3;
            else return c.end_time;
        },
        control);
}

double max_level_bound(const ControlStrategy& control) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ZeroControl>) return 0.0;
            else if constexpr (std::is_same_v<T, PiecewiseConstant>)
                return *std::max_element(c.levels.begin(), c.levels.end());
            else if constexpr (std::is_same_v<T, SingleLockdown>) return c.level;
            else if constexpr (std::is_same_v<T, MaintainFeedback>) return c.clamp;
            else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) return 1.0;
            else return c.level;
        },
        control);
}

double evaluate(const ControlStrategy& control, const EpidemicParams& params, double t,
                const EpidemicState& state) {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ZeroControl>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                auto it = std::lower_bound(c.knots.begin(), c.knots.end(), t);
                if (it == c.knots.begin() || it == c.knots.end()) return 0.0;
                return c.levels[static_cast<std::size_t>(it - c.knots.begin()) - 1];
            } else if constexpr (std::is_same_v<T, SingleLockdown>) {
                return (t > c.start && t <= c.start + c.duration) ? c.level : 0.0;
            } else if constexpr (std::is_same_v<T, MaintainFeedback>) {
                if (t <= c.start || t > c.end_time || state.s <= params.herd_threshold())
                    return 0.0;
                return std::min(c.clamp, 1.0 - params.gamma / (params.beta * state.s));
            } else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) {
                if (t > c.t1 && t <= c.t2) {
                    if (state.s <= params.herd_threshold()) return 0.0;
                    return std::min(1.0, 1.0 - params.gamma / (params.beta * state.s));
                }
                return (t > c.t2 && t <= c.t3) ? 1.0 : 0.0;
            } else {
                static_assert(std::is_same_v<T, ReffThreshold>);
                if (t < 0.0 || t > c.end_time) return 0.0;
                const double r_eff = (1.0 - c.level) * params.beta * state.s / params.gamma;
                return r_eff > c.threshold ? c.level : 0.0;
            }
        },
        control);
}

CostReport costs(const ControlStrategy& control, const EpidemicParams& params,
                 const EpidemicState& initial, const SolverOptions& options) {
    if (!std::isfinite(support_end(control)))
        throw UnboundedCost("control support is not bounded");
    validate(control);

    if (std::holds_alternative<ZeroControl>(control)) return {0.0, 0.0, 0.0};
    if (const auto* pc = std::get_if<PiecewiseConstant>(&control)) {
        CostReport rep{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < pc->levels.size(); ++k) {
            const double dt = pc->knots[k + 1] - pc->knots[k];
            rep.l1 += pc->levels[k] * dt;
            if (pc->levels[k] > 0.0) {
                rep.l0 += dt;
                rep.sup = std::max(rep.sup, pc->levels[k]);
            }
        }
        return rep;
    }
    if (const auto* ld = std::get_if<SingleLockdown>(&control))
        return {ld->level * ld->duration, ld->duration, ld->level};

    // Feedback kinds: realize the control along its trajectory and use
    // trapezoidal quadrature on the sample grid.  Since u <= sup * [u > 0]
    // pointwise, the reported values satisfy l1 <= l0 * sup by construction.
    const Realized r = realize(control, params, initial, options);
    CostReport rep{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k + 1 < r.t.size(); ++k) {
        const double dt = r.t[k + 1] - r.t[k];
        rep.l1 += 0.5 * (r.u[k] + r.u[k + 1]) * dt;
        rep.l0 += 0.5 * ((r.u[k] > 0.0 ? 1.0 : 0.0) + (r.u[k + 1] > 0.0 ? 1.0 : 0.0)) * dt;
    }
    for (double u : r.u) rep.sup = std::max(rep.sup, u);
    return rep;
}

ControlStrategy quantize(const ControlStrategy& control, double amplitude, double wavelength,
                         double support_bound) {
    validate(control);
    if (!std::holds_alternative<ZeroControl>(control) &&
        !std::holds_alternative<PiecewiseConstant>(control) &&
        !std::holds_alternative<SingleLockdown>(control))
        throw InvalidControl(
            "feedback controls need the quantize overload that takes params and an initial state");
    if (!std::isfinite(amplitude) || amplitude <= 0.0 || amplitude > 1.0)
        throw InvalidControl("quantize amplitude must lie in (0, 1]");
    if (!std::isfinite(wavelength) || wavelength <= 0.0)
        throw InvalidControl("quantize wavelength must be > 0");
    if (!std::isfinite(support_bound) || support_end(control) > support_bound + 1e-9)
        throw InvalidControl("control support must lie within [0, support_bound]");
    if (max_level_bound(control) > amplitude + 1e-12) {
        std::ostringstream msg;
        msg << "amplitude " << amplitude << " is below the control's sup level "
            << max_level_bound(control);
        throw AmplitudeTooSmall(msg.str());
    }

    if (std::holds_alternative<ZeroControl>(control)) return ZeroControl{};
    if (const auto* pc = std::get_if<PiecewiseConstant>(&control))
        return quantize_windows([&](double a, double b) { return window_integral(*pc, a, b); },
                                amplitude, wavelength, support_bound);
    return quantize_windows(
        [ld = &std::get<SingleLockdown>(control)](double a, double b) {
            return window_integral(*ld, a, b);
        },
        amplitude, wavelength, support_bound);
}

ControlStrategy quantize(const ControlStrategy& control, double amplitude, double wavelength,
                         double support_bound, const EpidemicParams& params,
                         const EpidemicState& initial, const SolverOptions& options) {
    if (!std::holds_alternative<MaintainFeedback>(control) &&
        !std::holds_alternative<WaitMaintainSuppressRelax>(control) &&
        !std::holds_alternative<ReffThreshold>(control))
        return quantize(control, amplitude, wavelength, support_bound);

    validate(control);
    if (!std::isfinite(amplitude) || amplitude <= 0.0 || amplitude > 1.0)
        throw InvalidControl("quantize amplitude must lie in (0, 1]");
    if (!std::isfinite(wavelength) || wavelength <= 0.0)
        throw InvalidControl("quantize wavelength must be > 0");
    if (!std::isfinite(support_bound) || support_end(control) > support_bound + 1e-9)
        throw InvalidControl("control support must lie within [0, support_bound]");

    const Realized r = realize(control, params, initial, options);
    const double realized_sup = *std::max_element(r.u.begin(), r.u.end());
    if (realized_sup > amplitude + 1e-12) {
        std::ostringstream msg;
        msg << "amplitude " << amplitude << " is below the realized sup level " << realized_sup;
        throw AmplitudeTooSmall(msg.str());
    }
    return quantize_windows([&](double a, double b) { return window_integral(r, a, b); },
                            amplitude, wavelength, support_bound);
}

} // namespace sir
