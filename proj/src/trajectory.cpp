#include "sircontrol/trajectory.hpp"

#include "sircontrol/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace sir {

Trajectory::Trajectory(double step, std::vector<TrajectoryPoint> points)
    : step_(step), points_(std::move(points)) {
    if (points_.empty()) throw InvalidState("trajectory must contain at least one sample");
    if (!(step_ > 0.0)) throw InvalidOptions("trajectory step must be > 0");
    for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
        if (std::abs(points_[k + 1].t - points_[k].t - step_) > 1e-9)
            throw InvalidState("trajectory samples must be uniformly spaced");
    }
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "t,S,I,R,u\n";
    for (const TrajectoryPoint& p : points_) {
        out << format_full(p.t) << ',' << format_full(p.state.s) << ',' << format_full(p.state.i)
            << ',' << format_full(p.state.r) << ',' << format_full(p.u) << '\n';
    }
}

double peak_prevalence(const Trajectory& trajectory) {
    const auto& pts = trajectory.points();
    auto it = std::max_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.state.i < b.state.i;
    });
    return it->state.i;
}

} // namespace sir
