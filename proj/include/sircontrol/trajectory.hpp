#pragma once

#include "sircontrol/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace sir {

struct TrajectoryPoint {
    double t;
    EpidemicState state;
    double u; // realized control level at t
};

// Result of one integration: states sampled on the uniform grid t_k = k*step,
// starting at t = 0.  Immutable after construction.
class Trajectory {
public:
    Trajectory(double step, std::vector<TrajectoryPoint> points);

    double step() const { return step_; }
    double horizon() const { return points_.back().t; }
    std::size_t size() const { return points_.size(); }
    const TrajectoryPoint& operator[](std::size_t k) const { return points_[k]; }
    const TrajectoryPoint& front() const { return points_.front(); }
    const TrajectoryPoint& back() const { return points_.back(); }
    const std::vector<TrajectoryPoint>& points() const { return points_; }

    // Columns t,S,I,R,u; one row per sample; full double precision.
    void write_csv(std::ostream& out) const;

private:
    double step_;
    std::vector<TrajectoryPoint> points_;
};

// Largest sampled infectious share.
double peak_prevalence(const Trajectory& trajectory);

} // namespace sir
