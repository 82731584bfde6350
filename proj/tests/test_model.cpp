#include "helpers.hpp"
#include "oracles/hand_values.hpp"

#include "sputter/errors.hpp"
#include "sputter/model.hpp"
#include "sputter/sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace sputter;
using enum Param;

TEST_CASE("system function at the origin vanishes without input")
{
    const auto d = system_rhs(nominal_parameters(), State{0, 0, 0}, 0.0);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);
}

TEST_CASE("system function hand values")
{
    auto p = test::simple_params();
    const auto d = system_rhs(p, State{1.0, 2.0 / 3.0, 0.3}, 0.7);
    CHECK(std::abs(d[1] - oracle::f2_balanced) < 1e-15);

    const auto d0 = system_rhs(p, State{0, 0, 0}, 2.0);
    CHECK(d0[0] == oracle::f1_origin_b3_u2);
}

TEST_CASE("system function rejects out-of-domain arguments")
{
    auto p = nominal_parameters();
    CHECK_THROWS_AS(system_rhs(p, State{0.1, 1.2, 0.5}, 0.1), DomainError);
    CHECK_THROWS_AS(system_rhs(p, State{0.1, 0.2, 0.5}, -0.1), DomainError);
    p[a123] = 2.0 * p[a12];
    CHECK_THROWS_AS(system_rhs(p, State{0.1, 0.2, 0.5}, 0.1), DomainError);
}

TEST_CASE("output hand values")
{
    auto p = test::simple_params();
    const auto y = output(p, State{1.0, 0.5, 0.0});
    CHECK(y.y_lambda == doctest::Approx(oracle::y_lambda_c11_1_c12_half_xrg_1).epsilon(1e-15));
    CHECK(y.y_sb == oracle::y_sb_c20_5_c21_2_xta_half);
    CHECK(output(p, State{0.3, 0.0, 0.0}).y_sb == p[c20]);
    CHECK_THROWS_AS(output(p, State{0.0, 0.5, 0.0}), SingularInputError);
}

TEST_CASE("inverse output")
{
    auto p = test::simple_params();
    CHECK(inverse_output(p, Output{0.0, 5.0}).x_rg == oracle::x_rg_from_y0);
    CHECK(inverse_output(p, Output{0.0, 5.0}).x_ta == 0.0);
    auto q = p;
    q[c21] = 0.0;
    CHECK_THROWS_AS(inverse_output(q, Output{1.0, 4.0}), DegenerateParameterError);

    Rng rng(7);
    const auto pn = nominal_parameters();
    for (int k = 0; k < 200; ++k) {
        const State x{rng.uniform(1e-6, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        const auto back = inverse_output(pn, output(pn, x));
        CHECK(back.x_rg == doctest::Approx(x.x_rg).epsilon(1e-12));
        CHECK(back.x_ta == doctest::Approx(x.x_ta).epsilon(1e-12));
    }
}

TEST_CASE("static characteristic hand values")
{
    auto p = test::simple_params();
    const auto e0 = static_pi(p, 0.0);
    CHECK(e0.u_eq == 0.0);
    CHECK(e0.x_eq.x_ta == 0.0);
    CHECK(e0.x_eq.x_su == 0.0);

    const auto e1 = static_pi(p, 1.0);
    CHECK(e1.x_eq.x_ta == doctest::Approx(oracle::x_ta_eq_xrg_1).epsilon(1e-15));
    CHECK(detail::pi_su(p, 1.0, 0.5) == doctest::Approx(oracle::x_su_eq_xrg_1_xta_half).epsilon(1e-15));
    CHECK_THROWS_AS(static_pi(p, 1.5), DomainError);
}

TEST_CASE("static characteristic is an equilibrium of the system")
{
    const auto p = nominal_parameters();
    for (double xr : {0.01, 0.05, 0.2, 0.41, 0.9}) {
        const auto e = static_pi(p, xr);
        const auto d = detail::rhs(p, e.x_eq, e.u_eq);
        for (double v : d) CHECK(std::abs(v) < 1e-12);
    }
    auto q = test::simple_params();
    const auto e = static_pi(q, 1.0);
    for (double v : detail::rhs(q, e.x_eq, e.u_eq)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("measurable static characteristic composes inverse output and equilibrium")
{
    auto p = test::simple_params();
    const auto phi = static_phi(p, -std::log(0.5));
    CHECK(phi.y_sb_eq == doctest::Approx(oracle::y_sb_eq_composed).epsilon(1e-14));
    CHECK(phi.x_su_eq == doctest::Approx(oracle::x_su_eq_composed).epsilon(1e-14));
    CHECK_THROWS_AS(static_phi(p, -0.1), DomainError);
    CHECK_THROWS_AS(static_phi(p, 0.5), DomainError); // below g1(p, x_rg_max)

    const auto big = static_phi(nominal_parameters(), 200.0);
    CHECK(std::isfinite(big.u_eq));
    CHECK(big.x_su_eq >= 0.0);
}

TEST_CASE("domain checks name the violated constraint")
{
    auto p = nominal_parameters();
    CHECK(check_domains(p, {}).ok());
    CHECK(check_domains(p, {}, State{0, 0, 0}).ok("D_x"));

    p[a123] = p[a12] + 0.1;
    try {
        require_parameters(p, {});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.constraint() == "a12 >= a123");
    }

    auto q = nominal_parameters();
    q[c12] = 1.0; // c12 * x_rg_max = 1 is excluded
    const auto v = check_domains(q, {}).violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == "c12 * x_rg_max < 1");

    auto r = nominal_parameters();
    r[a33c] = 2.0 * r[a33m];
    CHECK(!check_domains(r, {}).ok("D_p"));

    ModelDomain dom;
    dom.u_max = 1.0;
    CHECK(!check_domains(nominal_parameters(), dom, std::nullopt, 2.0).ok("D_u"));
    CHECK(!check_domains(nominal_parameters(), {}, std::nullopt, std::nullopt, Output{0.3, 4.0}).ok("D_y"));
    CHECK(check_domains(nominal_parameters(), {}, std::nullopt, std::nullopt, Output{3.0, 4.0}).ok("D_y"));
}

TEST_CASE("equilibrium start")
{
    auto p = test::simple_params();
    const auto x0 = equilibrium_init(p, -std::log(0.5));
    CHECK(x0.x_rg == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x0.x_ta == doctest::Approx(oracle::x_ta_eq_xrg_1).epsilon(1e-15));
    CHECK(x0.x_su == doctest::Approx(oracle::x_su_eq_composed).epsilon(1e-15));

    const auto far = equilibrium_init(nominal_parameters(), 60.0);
    CHECK(far.x_rg < 1e-30);
    CHECK(far.x_ta < 1e-29);
    CHECK(far.x_su < 1e-28);

    const auto pn = nominal_parameters();
    for (double y : {2.2, 3.0, 3.7, 5.0}) {
        const auto x = equilibrium_init(pn, y);
        const double u = static_pi(pn, x.x_rg).u_eq;
        for (double v : system_rhs(pn, x, u)) CHECK(std::abs(v) <= 1e-10);
    }
}

TEST_CASE("nominal parameters keep the inflow positive")
{
    const auto p = nominal_parameters();
    for (int k = 1; k <= 1000; ++k) CHECK(static_pi(p, k / 1000.0).u_eq > 0.0);
}
