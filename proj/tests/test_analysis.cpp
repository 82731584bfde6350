#include "helpers.hpp"

#include "sputter/analysis.hpp"
#include "sputter/order.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sputter;
using enum Param;

namespace {

std::vector<double> pack(const ParameterVector& p, std::initializer_list<double> rest)
{
    std::vector<double> z(p.values().begin(), p.values().end());
    z.insert(z.end(), rest);
    return z;
}

ParameterVector unpack(std::span<const double> z)
{
    ParameterVector p;
    for (std::size_t i = 0; i < kNumParams; ++i) p[i] = z[i];
    return p;
}

AnalysisSettings quick()
{
    AnalysisSettings s;
    s.samples = 200;
    s.pairs = 10;
    s.t_end = 5.0;
    return s;
}

bool ordered_states(const Trajectory& a, const Trajectory& b, double tol)
{
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto xa = a.x[k].to_array(), xb = b.x[k].to_array();
        for (int i = 0; i < 3; ++i)
            if (xa[i] > xb[i] + tol) return false;
    }
    return true;
}

} // namespace

TEST_CASE("sign pattern text form")
{
    const auto sp = SignPattern::parse("-++;+-0;*+-");
    CHECK(sp.rows() == 3);
    CHECK(sp.cols() == 3);
    CHECK(sp.at(1, 2) == Sign::zero);
    CHECK(sp.at(2, 0) == Sign::undefined);
    CHECK(sp.to_string() == "-++;+-0;*+-");
    CHECK_THROWS_AS(SignPattern::parse("-+;+"), std::invalid_argument);
    CHECK_THROWS_AS(SignPattern::parse("-x"), std::invalid_argument);
}

TEST_CASE("finite differences")
{
    const VectorMap twice = [](std::span<const double> z) { return std::vector<double>{2.0 * z[0]}; };
    const std::vector<double> z{0.37};
    CHECK(std::abs(jacobian_fd(twice, z)(0, 0) - 2.0) < 1e-8);

    const auto p = nominal_parameters();
    const VectorMap g = [](std::span<const double> v) {
        const auto y = detail::out(unpack(v), State{v[16], v[17], 0.0});
        return std::vector<double>{y.y_lambda, y.y_sb};
    };
    const std::vector<std::size_t> wrt{16, 17};
    const auto jg = jacobian_fd(g, pack(p, {0.3, 0.4}), 1e-6, wrt);
    CHECK(jg(0, 0) < 0.0);
    CHECK(jg(0, 1) == 0.0);
    CHECK(jg(1, 0) == 0.0);
    CHECK(jg(1, 1) < 0.0);
    CHECK(jg(0, 0) == doctest::Approx(-p[c11] / 0.3).epsilon(1e-8));

    const VectorMap f = [](std::span<const double> v) {
        const auto d = detail::rhs(unpack(v), State{v[16], v[17], v[18]}, v[19]);
        return std::vector<double>(d.begin(), d.end());
    };
    const std::vector<std::size_t> wrt_u{19};
    const auto ju = jacobian_fd(f, pack(p, {0.3, 0.4, 0.5, 0.7}), 1e-6, wrt_u);
    CHECK(ju(0, 0) == doctest::Approx(p[b]).epsilon(1e-9));
    CHECK(ju(1, 0) == 0.0);
    CHECK(ju(2, 0) == 0.0);
}

TEST_CASE("certification verdicts")
{
    const VectorMap square = [](std::span<const double> z) { return std::vector<double>{z[0] * z[0]}; };
    SampledDomain pos{100, {{0.1, 1.0}}, 5};
    SampledDomain both{100, {{-1.0, 1.0}}, 5};
    CHECK(certify_sign_pattern("pos", square, pos, SignPattern::parse("+")).verdict == Verdict::pass);
    const auto bad = certify_sign_pattern("neg", square, pos, SignPattern::parse("-"));
    CHECK(bad.verdict == Verdict::fail);
    CHECK(bad.mismatch_count == 100);
    CHECK(!bad.mismatches.front().point.empty());
    CHECK(certify_sign_pattern("star", square, pos, SignPattern::parse("*")).verdict == Verdict::inconclusive);
    const auto star = certify_sign_pattern("star", square, both, SignPattern::parse("*"));
    CHECK(star.verdict == Verdict::pass);
    CHECK(star.undefined_witnesses.front().plus_point.has_value());
    CHECK(star.undefined_witnesses.front().minus_point.has_value());
    CHECK_THROWS_AS(certify_sign_pattern("dims", square, pos, SignPattern::parse("++")), std::invalid_argument);
}

TEST_CASE("all sign patterns hold around the nominal parameters")
{
    const auto certs = certify_all_patterns(nominal_parameters(), quick());
    CHECK(certs.size() == 10);
    for (const auto& c : certs) {
        INFO(c.name << " observed " << c.observed.to_string());
        CHECK(c.verdict == Verdict::pass);
    }
    // the coverage coupling of x_ta into f2 through x_su is identically zero
    CHECK(certs[2].observed.at(1, 2) == Sign::zero);
}

TEST_CASE("ordered parameters give ordered states")
{
    const auto p = nominal_parameters();
    const State x0{0.1, 0.3, 0.4};
    IntegratorSettings is;
    is.t_end = 10.0;
    const auto u = InputSignal({{0.0, 0.6}, {3.0, 0.7}});
    const auto base = integrate(p, x0, u, is);
    CHECK(ordered_states(base, integrate(p, x0, u, is), 0.0));

    auto up_a212 = p;
    up_a212[a212] *= 1.1;
    CHECK(ordered_states(base, integrate(up_a212, x0, u, is), 1e-6));

    // a22 carries sign -, so raising it moves to the lower side
    auto up_a22 = p;
    up_a22[a22] *= 1.1;
    const auto lowered = integrate(up_a22, x0, u, is);
    CHECK(!ordered_states(base, lowered, 1e-6));
    CHECK(ordered_states(lowered, base, 1e-6));
}

TEST_CASE("order checks on a reduced budget")
{
    const auto s = quick();
    const auto p = nominal_parameters();
    CHECK(certify_cooperativity(p, s).verdict == Verdict::pass);
    CHECK(certify_parameter_monotonicity(p, s).verdict == Verdict::pass);
    const auto [dyn, stat] = certify_output_monotonicity(p, s);
    CHECK(dyn.verdict == Verdict::pass);
    CHECK(stat.verdict == Verdict::pass);
    CHECK(stat.grid_points == s.pairs * s.static_grid_points);
}

TEST_CASE("nominal static characteristic is S-shaped")
{
    const auto w = s_shape_witness(nominal_parameters(), AnalysisSettings{});
    CHECK(w.verdict == Verdict::pass);
    CHECK(w.sign_changes >= 1);

    // with only the linear consumption term left, u_eq = a11 x_rg / b is monotone
    auto flat = nominal_parameters();
    flat[a113] = 0.0;
    flat[a112] = 0.0;
    flat[a123] = 0.0;
    flat[a12] = 0.0;
    CHECK(s_shape_witness(flat, AnalysisSettings{}).sign_changes == 0);
}

TEST_CASE("verification refuses parameters outside the admissible set")
{
    auto p = nominal_parameters();
    p[a123] = 2.0 * p[a12];
    const auto rep = verify(p, quick());
    CHECK(rep.overall() == Verdict::fail);
    REQUIRE(rep.domain_violations.size() == 1);
    CHECK(rep.domain_violations[0] == "D_p: a12 >= a123");
    std::ostringstream os;
    write_verification_report(os, rep);
    CHECK(os.str().find("FAIL D_p: a12 >= a123") != std::string::npos);
}

TEST_CASE("verification report is reproducible")
{
    const auto s = quick();
    const auto a = verify(nominal_parameters(), s);
    const auto b = verify(nominal_parameters(), s);
    std::ostringstream ra, rb;
    write_verification_report(ra, a);
    write_verification_report(rb, b);
    CHECK(ra.str() == rb.str());
    CHECK(verification_summary_json(a) == verification_summary_json(b));
    CHECK(a.overall() == Verdict::pass);
}
