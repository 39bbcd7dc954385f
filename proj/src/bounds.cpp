#include "sircontrol/bounds.hpp"

#include "sircontrol/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace sir {

IncidenceBounds incidence_bounds(const EpidemicParams& params, const EpidemicState& initial) {
    if (initial.s <= 0.0 || initial.i <= 0.0)
        throw InvalidState("incidence bounds require S(0) > 0 and I(0) > 0");
    const double lower = std::max(0.0, 1.0 - params.herd_threshold() / initial.s);
    const double upper = 1.0 - final_size(params, initial) / initial.s;
    return {lower, upper};
}

std::optional<double> herd_immunity_time(const Trajectory& trajectory,
                                         const EpidemicParams& params) {
    const double threshold = params.herd_threshold();
    const auto& pts = trajectory.points();
    if (pts.front().state.s <= threshold) return 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double s_prev = pts[k - 1].state.s;
        const double s_here = pts[k].state.s;
        if (s_here <= threshold) {
            const double w = (s_prev - threshold) / (s_prev - s_here);
            return pts[k - 1].t + w * (pts[k].t - pts[k - 1].t);
        }
    }
    return std::nullopt;
}

double herd_immunity_time_bound(const EpidemicParams& params, const EpidemicState& initial,
                                double l1_cost) {
    if (initial.i <= 0.0) throw InvalidState("herd-immunity time bound requires I(0) > 0");
    if (!std::isfinite(l1_cost) || l1_cost < 0.0)
        throw InvalidParams("l1 cost must be finite and >= 0");
    const double growth = std::log(params.beta * initial.s / params.gamma);
    return l1_cost + growth / (params.beta * initial.i) * std::exp(params.gamma * l1_cost);
}

} // namespace sir
