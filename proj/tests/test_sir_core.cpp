#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sircontrol/model.hpp"
#include "sircontrol/simulate.hpp"
#include "sircontrol/trajectory.hpp"

#include "support/strategies.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace sir;
using testing::table1_params;
using testing::table1_state;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(EpidemicParams(0.0, 0.2), InvalidParams);
    CHECK_THROWS_AS(EpidemicParams(-0.6, 0.2), InvalidParams);
    CHECK_THROWS_AS(EpidemicParams(0.6, 0.0), InvalidParams);
    CHECK_THROWS_AS(EpidemicParams(std::nan(""), 0.2), InvalidParams);
    CHECK_THROWS_AS(EpidemicParams(0.6, std::numeric_limits<double>::infinity()), InvalidParams);

    const EpidemicParams p = table1_params();
    CHECK(p.r0() == doctest::Approx(3.0));
    CHECK(p.herd_threshold() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("state validation") {
    CHECK_THROWS_AS(EpidemicState(-0.1, 0.5), InvalidState);
    CHECK_THROWS_AS(EpidemicState(0.5, -0.1), InvalidState);
    CHECK_THROWS_AS(EpidemicState(0.8, 0.3), InvalidState); // sum > 1
    CHECK_THROWS_AS(EpidemicState(std::nan(""), 0.1), InvalidState);
    CHECK_THROWS_AS(EpidemicState(0.5, 0.2, 0.5), InvalidState);

    const EpidemicState x(0.7, 0.1);
    CHECK(x.r == doctest::Approx(0.2));
}

TEST_CASE("solver options validation") {
    SolverOptions o;
    o.step = 0.0;
    CHECK_THROWS_AS(validate(o), InvalidOptions);
    o = {};
    o.horizon = -1.0;
    CHECK_THROWS_AS(validate(o), InvalidOptions);
    o = {};
    o.extinction_threshold = -1e-9;
    CHECK_THROWS_AS(validate(o), InvalidOptions);
    CHECK_NOTHROW(validate(SolverOptions{}));
}

TEST_CASE("full suppression freezes S and decays I exponentially") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    SolverOptions opt;
    opt.horizon = 10.0;
    opt.extinction_threshold = 0.0;

    const Trajectory traj = integrate(p, x0, SingleLockdown{0.0, 10.0, 1.0}, opt);
    const EpidemicState end = traj.back().state;
    CHECK(end.s == doctest::Approx(x0.s).epsilon(1e-12));
    CHECK(end.i == doctest::Approx(x0.i * std::exp(-p.gamma * 10.0)).epsilon(1e-9));
    CHECK(peak_prevalence(traj) == x0.i); // I strictly decays from t = 0
}

TEST_CASE("disease-free initial state stays put") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0(0.9, 0.0);
    SolverOptions opt;
    opt.horizon = 5.0;
    opt.extinction_threshold = 0.0;

    const Trajectory traj = integrate(p, x0, ZeroControl{}, opt);
    CHECK(traj.back().state.s == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(traj.back().state.i == 0.0);
    CHECK(final_size(p, x0) == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("uncontrolled epidemic reproduces the reference incidence and peak") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();

    const double j = total_incidence(p, x0, ZeroControl{}, SolverOptions{});
    CHECK(std::abs(j - 0.940) < 0.001);
    CHECK(j == doctest::Approx(0.9404810844845605).epsilon(1e-12));

    const Trajectory traj = integrate(p, x0, ZeroControl{}, SolverOptions{});
    const double peak = peak_prevalence(traj);
    CHECK(std::abs(peak - 0.300) < 0.002);

    // closed form: I + S - h - h log(S/h) is zero at the peak, h = gamma/beta
    const double h = p.herd_threshold();
    const double peak_exact = x0.i + x0.s - h + h * std::log(h / x0.s);
    CHECK(peak == doctest::Approx(peak_exact).epsilon(1e-6));
    CHECK(peak <= peak_exact + 1e-12); // grid samples cannot exceed the true max
}

TEST_CASE("final_size matches integration to extinction") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();

    SolverOptions opt;
    opt.horizon = 2000.0;
    opt.extinction_threshold = 1e-13;
    const Trajectory traj = integrate(p, x0, ZeroControl{}, opt);

    const double s_inf = final_size(p, x0);
    CHECK(s_inf == doctest::Approx(traj.back().state.s).epsilon(1e-6));
    CHECK(s_inf == doctest::Approx(0.05951296362423435).epsilon(1e-12));

    // below the herd threshold with no infections nothing moves
    CHECK(final_size(p, EpidemicState(0.2, 0.0)) == 0.2);
    CHECK_THROWS_AS(final_size(p, EpidemicState(0.0, 0.1, 0.9)), InvalidState);
}

TEST_CASE("final-size shortcut agrees with integration to extinction under control") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    SolverOptions deep;
    deep.horizon = 2000.0;
    deep.extinction_threshold = 1e-13;

    for (const ControlStrategy& c :
         {ControlStrategy{SingleLockdown{23.5, 20.0, 0.75}},
          ControlStrategy{PiecewiseConstant{{5.0, 18.0, 40.0}, {0.3, 0.6}}},
          ControlStrategy{MaintainFeedback{17.0, 55.0}}}) {
        const double j_shortcut = total_incidence(p, x0, c, SolverOptions{});
        const Trajectory traj = integrate(p, x0, c, deep);
        const double j_oracle = 1.0 - traj.back().state.s / x0.s;
        CHECK(j_shortcut == doctest::Approx(j_oracle).epsilon(1e-6));
    }
}

TEST_CASE("recovered flow equals susceptible depletion (gamma * integral of I)") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    const Trajectory traj = integrate(p, x0, ZeroControl{}, SolverOptions{});

    std::vector<double> t, i;
    for (const TrajectoryPoint& pt : traj.points()) {
        t.push_back(pt.t);
        i.push_back(pt.state.i);
    }
    const double lhs = p.gamma * testing::trapezoid(t, i);
    const double rhs = x0.s + x0.i - traj.back().state.s;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("invert_special round-trips and rejects values below the minimum") {
    const double rho = 3.0;
    const auto f = [rho](double x) { return x - std::log(x) / rho; };
    const double y_min = (1.0 + std::log(rho)) / rho;

    for (double y : {y_min + 1e-6, 0.75, 0.9, 1.2, 2.0, 5.0}) {
        const double x = invert_special(rho, y);
        CHECK(x > 0.0);
        CHECK(x <= 1.0 / rho + 1e-12);
        // bisection resolves x to 1e-12; the residual scales with f'(x)
        const double slope = std::abs(1.0 - 1.0 / (rho * x));
        CHECK(std::abs(f(x) - y) <= (2.0 + slope) * 1e-12);
    }
    CHECK(std::abs(f(invert_special(rho, 1.0)) - 1.0) < 1e-10);
    CHECK(invert_special(rho, y_min) == doctest::Approx(1.0 / rho).epsilon(1e-6));
    CHECK_THROWS_AS(invert_special(rho, y_min - 1e-6), BelowMinimum);
    CHECK_THROWS_AS(invert_special(-1.0, 1.0), InvalidParams);
    CHECK_THROWS_AS(invert_special(rho, std::nan("")), InvalidParams);
}

TEST_CASE("vulnerability is conserved without control") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();

    const double third = 1.0 / 3.0;
    CHECK(vulnerability(p, EpidemicState(third, 0.0)) ==
          doctest::Approx(third - third * std::log(third)).epsilon(1e-12));
    CHECK_THROWS_AS(vulnerability(p, EpidemicState(0.0, 0.5, 0.5)), InvalidState);

    const Trajectory traj = integrate(p, x0, ZeroControl{}, SolverOptions{});
    const double v0 = vulnerability(p, x0);
    for (std::size_t k = 0; k < traj.size(); k += 50)
        CHECK(vulnerability(p, traj[k].state) == doctest::Approx(v0).epsilon(1e-6));
}

TEST_CASE("constant-control invariant is conserved inside the lockdown window") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    const double c = 0.6;
    const SingleLockdown lockdown{20.0, 15.0, c};
    SolverOptions opt;
    opt.horizon = 40.0;
    opt.extinction_threshold = 0.0;
    const Trajectory traj = integrate(p, x0, lockdown, opt);

    const auto invariant = [&](const EpidemicState& x) {
        return (1.0 - c) * (x.s + x.i) - p.herd_threshold() * std::log(x.s);
    };
    const std::size_t first = static_cast<std::size_t>(20.0 / opt.step) + 1;
    const std::size_t last = static_cast<std::size_t>(35.0 / opt.step);
    const double ref = invariant(traj[first].state);
    for (std::size_t k = first; k <= last; k += 25)
        CHECK(invariant(traj[k].state) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("trajectories stay on the simplex with monotone S and R") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    const Trajectory traj = integrate(p, x0, SingleLockdown{10.0, 25.0, 0.8}, SolverOptions{});

    for (std::size_t k = 0; k < traj.size(); ++k) {
        const EpidemicState& x = traj[k].state;
        CHECK(x.s + x.i + x.r == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(x.s >= 0.0);
        CHECK(x.i >= 0.0);
        if (k > 0) {
            const EpidemicState& prev = traj[k - 1].state;
            CHECK(x.s <= prev.s + 1e-12);
            CHECK(x.s + x.i <= prev.s + prev.i + 1e-12);
            CHECK(x.r >= prev.r - 1e-12);
        }
    }
}

TEST_CASE("halving the step moves reported incidence by less than 1e-6") {
    const EpidemicParams p = table1_params();
    const EpidemicState x0 = table1_state();
    // switch times deliberately off any step grid
    const SingleLockdown lockdown{23.456789, 19.87654321, 0.75};

    SolverOptions coarse;
    SolverOptions fine;
    fine.step = 0.005;
    const double j_coarse = total_incidence(p, x0, lockdown, coarse);
    const double j_fine = total_incidence(p, x0, lockdown, fine);
    CHECK(std::abs(j_coarse - j_fine) < 1e-6);

    const double j0_coarse = total_incidence(p, x0, ZeroControl{}, coarse);
    const double j0_fine = total_incidence(p, x0, ZeroControl{}, fine);
    CHECK(std::abs(j0_coarse - j0_fine) < 1e-6);
}

TEST_CASE("trajectory CSV round-trips at full precision") {
    const EpidemicParams p = table1_params();
    SolverOptions opt;
    opt.horizon = 2.0;
    const Trajectory traj = integrate(p, table1_state(), ZeroControl{}, opt);

    std::ostringstream out;
    traj.write_csv(out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,S,I,R,u");

    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double v[5];
        const char* s = line.c_str();
        char* end = nullptr;
        for (int c = 0; c < 5; ++c) {
            v[c] = std::strtod(s, &end);
            s = end + 1;
        }
        CHECK(v[0] == traj[rows].t);
        CHECK(v[1] == traj[rows].state.s);
        CHECK(v[2] == traj[rows].state.i);
        CHECK(v[3] == traj[rows].state.r);
        CHECK(v[4] == traj[rows].u);
        ++rows;
    }
    CHECK(rows == traj.size());
}

TEST_CASE("absurdly large steps raise IntegrationDiverged") {
    SolverOptions opt;
    opt.step = 50.0;
    opt.horizon = 1000.0;
    CHECK_THROWS_AS(integrate(table1_params(), EpidemicState(0.7, 0.3), ZeroControl{}, opt),
                    IntegrationDiverged);
}

TEST_CASE("controls reaching past the horizon raise HorizonTooShort") {
    SolverOptions opt;
    opt.horizon = 30.0;
    CHECK_THROWS_AS(
        total_incidence(table1_params(), table1_state(), SingleLockdown{20.0, 20.0, 0.5}, opt),
        HorizonTooShort);
}
