#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sircontrol/bounds.hpp"
#include "sircontrol/control.hpp"
#include "sircontrol/simulate.hpp"

#include "support/strategies.hpp"

#include <cmath>
#include <random>

using namespace sir;
using testing::table1_params;
using testing::table1_state;

namespace {
const EpidemicParams kParams = table1_params();
const EpidemicState kState = table1_state();
} // namespace

TEST_CASE("incidence bounds reproduce the reference envelope") {
    const IncidenceBounds b = incidence_bounds(kParams, kState);
    CHECK(std::abs(b.lower - 0.666) < 0.001);
    CHECK(std::abs(b.upper - 0.940) < 0.001);
    CHECK(b.lower == doctest::Approx(1.0 - kParams.herd_threshold() / kState.s).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(0.9404810844845605).epsilon(1e-12));
}

TEST_CASE("lower bound clamps to zero when the state is already immune") {
    const IncidenceBounds b = incidence_bounds(kParams, EpidemicState(0.3, 0.01));
    CHECK(b.lower == 0.0);
    CHECK(b.upper > 0.0);
    CHECK_THROWS_AS(incidence_bounds(kParams, EpidemicState(0.9, 0.0)), InvalidState);
}

TEST_CASE("every finite-cost strategy lands inside the envelope") {
    const IncidenceBounds b = incidence_bounds(kParams, kState);
    std::mt19937 rng(22031);
    for (int k = 0; k < 50; ++k) {
        const ControlStrategy c = testing::mixed_strategy(rng, k);
        const double j = total_incidence(kParams, kState, c, SolverOptions{});
        CHECK(j >= b.lower - 1e-6);
        CHECK(j <= b.upper + 1e-6);
    }
}

TEST_CASE("herd-immunity time of the uncontrolled epidemic") {
    const Trajectory traj = integrate(kParams, kState, ZeroControl{}, SolverOptions{});
    const auto t_h = herd_immunity_time(traj, kParams);
    REQUIRE(t_h.has_value());
    CHECK(*t_h == doctest::Approx(24.94852322520741).epsilon(1e-9));
    CHECK(std::abs(*t_h - 24.94) < 0.05);
}

TEST_CASE("herd-immunity time edge cases") {
    // already immune at t = 0
    SolverOptions opt;
    opt.horizon = 5.0;
    const Trajectory immune = integrate(kParams, EpidemicState(0.3, 0.01), ZeroControl{}, opt);
    CHECK(herd_immunity_time(immune, kParams) == 0.0);

    // horizon far too short for the crossing
    SolverOptions tiny;
    tiny.horizon = 1.0;
    const Trajectory early = integrate(kParams, kState, ZeroControl{}, tiny);
    CHECK(!herd_immunity_time(early, kParams).has_value());
}

TEST_CASE("herd-immunity time bound holds for every control with l1 <= 30") {
    std::mt19937 rng(63017);
    SolverOptions opt;
    opt.horizon = 1000.0;

    for (int k = 0; k < 40; ++k) {
        const PiecewiseConstant u =
            testing::scale_to_budget(testing::random_piecewise(rng, 1.0, 80.0), 30.0);
        const CostReport rep = costs(ControlStrategy{u}, kParams, kState, opt);
        REQUIRE(rep.l1 <= 30.0 + 1e-9);

        const Trajectory traj = integrate(kParams, kState, ControlStrategy{u}, opt);
        const auto t_h = herd_immunity_time(traj, kParams);
        REQUIRE(t_h.has_value()); // herd immunity cannot be postponed forever
        CHECK(*t_h <= herd_immunity_time_bound(kParams, kState, rep.l1));
    }
}

TEST_CASE("herd-immunity time bound input validation") {
    CHECK(herd_immunity_time_bound(kParams, kState, 0.0) > 24.0);
    CHECK_THROWS_AS(herd_immunity_time_bound(kParams, EpidemicState(0.9, 0.0), 10.0),
                    InvalidState);
    CHECK_THROWS_AS(herd_immunity_time_bound(kParams, kState, -1.0), InvalidParams);
    CHECK_THROWS_AS(
        herd_immunity_time_bound(kParams, kState, std::numeric_limits<double>::infinity()),
        InvalidParams);
}

TEST_CASE("infection tail mass decays geometrically past the herd time") {
    std::mt19937 rng(77003);
    SolverOptions opt;
    opt.horizon = 1000.0;

    for (int k = 0; k < 10; ++k) {
        const PiecewiseConstant u =
            testing::scale_to_budget(testing::random_piecewise(rng, 1.0, 60.0), 30.0);
        const double l1 = costs(ControlStrategy{u}, kParams, kState, opt).l1;
        const Trajectory traj = integrate(kParams, kState, ControlStrategy{u}, opt);
        const auto t_h = herd_immunity_time(traj, kParams);
        REQUIRE(t_h.has_value());

        // tail[k] = integral of I over [t_k, end]
        std::vector<double> tail(traj.size(), 0.0);
        for (std::size_t j = traj.size() - 1; j > 0; --j)
            tail[j - 1] = tail[j] + 0.5 * (traj[j - 1].state.i + traj[j].state.i) *
                                        (traj[j].t - traj[j - 1].t);

        const double from = *t_h + l1 + 1.0;
        const auto lag = static_cast<std::size_t>(10.0 / traj.step());
        for (std::size_t a = 0; a + lag < traj.size(); a += 50) {
            if (traj[a].t < from || tail[a] < 1e-8) continue;
            CHECK(tail[a + lag] <= 0.95 * tail[a]);
        }
    }
}

TEST_CASE("prevalence decays monotonically once support has ended past the herd time") {
    std::mt19937 rng(5150);
    SolverOptions opt;
    opt.horizon = 400.0;

    for (int k = 0; k < 10; ++k) {
        const ControlStrategy c = testing::mixed_strategy(rng, k);
        const Trajectory traj = integrate(kParams, kState, c, opt);
        const auto t_h = herd_immunity_time(traj, kParams);
        REQUIRE(t_h.has_value());
        const double tail_from = std::max(*t_h, support_end(c));
        for (std::size_t j = 1; j < traj.size(); ++j)
            if (traj[j - 1].t >= tail_from)
                CHECK(traj[j].state.i <= traj[j - 1].state.i + 1e-12);
    }
}
