#include "helpers.hpp"

#include "sputter/errors.hpp"
#include "sputter/model.hpp"
#include "sputter/sim.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sputter;

namespace {

IntegratorSettings settings(double dt, double t_end, double interval = 0.0)
{
    IntegratorSettings s;
    s.dt = dt;
    s.t_end = t_end;
    s.sample_interval = interval;
    return s;
}

double max_abs_diff(const State& a, const State& b)
{
    return std::max({std::abs(a.x_rg - b.x_rg), std::abs(a.x_ta - b.x_ta), std::abs(a.x_su - b.x_su)});
}

} // namespace

TEST_CASE("input signal validation")
{
    CHECK_THROWS_AS(InputSignal({}), ValidationError);
    CHECK_THROWS_AS(InputSignal({{0.5, 1.0}}), ValidationError);
    CHECK_THROWS_AS(InputSignal({{0.0, 1.0}, {1.0, -0.1}}), DomainError);
    CHECK_THROWS_AS(InputSignal({{0.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}), ValidationError);
    const InputSignal u({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(u.value_at(0.0) == 1.0);
    CHECK(u.value_at(1.999) == 1.0);
    CHECK(u.value_at(2.0) == 3.0);
    CHECK(u.value_at(50.0) == 3.0);
    CHECK(u.shifted(0.5).value_at(2.5) == 3.5);
}

TEST_CASE("equilibrium start stays put")
{
    const auto p = nominal_parameters();
    for (double xr : {0.03, 0.2, 0.6}) {
        const auto e = static_pi(p, xr);
        const auto traj = integrate(p, e.x_eq, InputSignal::constant(e.u_eq), settings(1e-3, 5.0, 0.1));
        for (const auto& x : traj.x) CHECK(max_abs_diff(x, e.x_eq) < 1e-9);
    }
}

TEST_CASE("origin is an equilibrium without input")
{
    const auto traj = integrate(nominal_parameters(), State{0, 0, 0}, InputSignal::constant(0.0), settings(1e-3, 2.0));
    for (const auto& x : traj.x) CHECK(max_abs_diff(x, State{0, 0, 0}) == 0.0);
    CHECK(traj.size() == 2001);
}

TEST_CASE("fourth-order convergence")
{
    const auto p = nominal_parameters();
    const State x0{0.05, 0.1, 0.2};
    const auto u = InputSignal({{0.0, 0.7}, {0.5, 0.9}});
    auto end_state = [&](double dt) { return integrate(p, x0, u, settings(dt, 1.0, 1.0)).x.back(); };
    const auto ref = end_state(0.004 / 4);
    const double e1 = max_abs_diff(end_state(0.004), ref);
    const double e2 = max_abs_diff(end_state(0.002), ref);
    // e(dt) - e(dt/4) over e(dt/2) - e(dt/4) is 17 for an exact fourth-order method
    const double order = std::log2(e1 / e2);
    CHECK(e1 > 0.0);
    CHECK(order >= 3.5);
}

TEST_CASE("sampling grid")
{
    const auto traj = integrate(nominal_parameters(), State{0.1, 0.2, 0.3}, InputSignal::constant(0.5),
                                settings(1e-3, 1.0, 0.05));
    CHECK(traj.size() == 21);
    CHECK(traj.time(20) == doctest::Approx(1.0));
    CHECK_THROWS_AS(integrate(nominal_parameters(), State{0.1, 0.2, 0.3}, InputSignal::constant(0.5),
                              settings(1e-3, 1.0, 0.0015)),
                    ValidationError);
    CHECK_THROWS_AS(integrate(nominal_parameters(), State{0.1, 1.2, 0.3}, InputSignal::constant(0.5),
                              settings(1e-3, 1.0)),
                    DomainError);
}

TEST_CASE("x_rg above its bound is reported, not clipped")
{
    const auto traj = integrate(nominal_parameters(), State{0.5, 0.5, 0.5}, InputSignal::constant(20.0),
                                settings(1e-3, 3.0, 0.1));
    CHECK(traj.x_rg_max_exceeded);
    CHECK(traj.x_rg_peak > 1.0);
}

TEST_CASE("input breakpoints off the step grid")
{
    // a breakpoint between two steps must influence the state from that instant on
    const auto p = nominal_parameters();
    const State x0{0.1, 0.2, 0.3};
    const auto a = integrate(p, x0, InputSignal({{0.0, 0.5}, {0.5005, 1.5}}), settings(1e-3, 1.0, 1.0));
    const auto fine = integrate(p, x0, InputSignal({{0.0, 0.5}, {0.5005, 1.5}}), settings(5e-4, 1.0, 1.0));
    CHECK(max_abs_diff(a.x.back(), fine.x.back()) < 1e-9);
}

TEST_CASE("cooperative response to ordered starts and inputs")
{
    const auto p = nominal_parameters();
    const State xa{0.1, 0.3, 0.4};
    const auto s = settings(1e-3, 20.0);
    const auto u = InputSignal::constant(0.6);

    const auto same_a = integrate(p, xa, u, s);
    const auto same_b = integrate(p, xa, u, s);
    for (std::size_t k = 0; k < same_a.size(); ++k) CHECK(max_abs_diff(same_a.x[k], same_b.x[k]) == 0.0);

    const auto shifted = integrate(p, State{xa.x_rg + 0.01, xa.x_ta, xa.x_su}, u, s);
    bool ok = true;
    for (std::size_t k = 0; k < same_a.size(); ++k) {
        const auto a = same_a.x[k].to_array(), b = shifted.x[k].to_array();
        for (int i = 0; i < 3; ++i) ok = ok && a[i] <= b[i] + 1e-6;
    }
    CHECK(ok);

    const auto stepped = integrate(p, xa, InputSignal({{0.0, 0.6}, {1.0, 0.7}}), s);
    ok = true;
    for (std::size_t k = 0; k < same_a.size(); ++k) {
        const auto a = same_a.x[k].to_array(), b = stepped.x[k].to_array();
        for (int i = 0; i < 3; ++i) ok = ok && a[i] <= b[i] + 1e-6;
    }
    CHECK(ok);
}

TEST_CASE("trajectory CSV")
{
    const auto p = nominal_parameters();
    const auto e = static_pi(p, 0.2);
    const auto traj = integrate(p, e.x_eq, InputSignal::constant(e.u_eq), settings(1e-3, 0.01));
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    const auto text = os.str();
    CHECK(text.rfind("t,u,x_rg,x_ta,x_su,y_lambda,y_sb\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
}

TEST_CASE("input schedule file")
{
    const auto dir = test::temp_dir("schedule");
    test::spit(dir / "u.csv", "t,u\n0,0.5\n1.5,0.8\n");
    const auto u = read_input_schedule(dir / "u.csv");
    CHECK(u.breakpoints().size() == 2);
    CHECK(u.value_at(2.0) == 0.8);
    test::spit(dir / "bad.csv", "t,v\n0,0.5\n");
    CHECK_THROWS_AS(read_input_schedule(dir / "bad.csv"), DatasetError);
    try {
        read_input_schedule(dir / "missing.csv");
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("missing.csv") != std::string::npos);
    }
}
