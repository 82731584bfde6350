#include "sputter/model.hpp"

#include "sputter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sputter {

namespace detail {

StateDerivative rhs(const ParameterVector& p, const State& x, double u) noexcept
{
    using enum Param;
    const double f1 = x.x_rg * (-p[a11] + p[a112] * (x.x_ta - 1.0) + p[a113] * (x.x_su - 1.0))
                      + p[a12] * x.x_ta - p[a123] * x.x_ta * (1.0 - x.x_su) + p[b] * u;
    const double f2 = p[a212] * x.x_rg * (1.0 - x.x_ta) - p[a22] * x.x_ta;
    const double f3 = p[a313] * x.x_rg * (1.0 - x.x_su) + p[a323] * x.x_ta * (1.0 - x.x_su)
                      - (p[a33c] * x.x_ta + p[a33m] * (1.0 - x.x_ta)) * x.x_su;
    return {f1, f2, f3};
}

Output out(const ParameterVector& p, const State& x) noexcept
{
    using enum Param;
    return {-p[c11] * std::log(p[c12] * x.x_rg), p[c20] - p[c21] * x.x_ta};
}

double pi_ta(const ParameterVector& p, double x_rg) noexcept
{
    using enum Param;
    return p[a212] * x_rg / (p[a212] * x_rg + p[a22]);
}

double pi_su(const ParameterVector& p, double x_rg, double x_ta) noexcept
{
    using enum Param;
    const double num = p[a313] * x_rg + p[a323] * x_ta;
    return num / (num + p[a33c] * x_ta + p[a33m] * (1.0 - x_ta));
}

double pi_u(const ParameterVector& p, double x_rg, double x_ta, double x_su) noexcept
{
    using enum Param;
    return -(p[a12] * x_ta - p[a123] * x_ta * (1.0 - x_su)
             + x_rg * (-p[a11] + p[a112] * (x_ta - 1.0) + p[a113] * (x_su - 1.0)))
           / p[b];
}

} // namespace detail

namespace {

void require_state(const State& x, const ModelDomain& domain)
{
    const auto report = check_domains(ParameterVector{}, domain, x);
    for (const auto& c : report.checks)
        if (c.set == "D_x" && !c.satisfied) throw DomainError(c.constraint);
}

} // namespace

bool DomainReport::ok() const noexcept
{
    for (const auto& c : checks)
        if (!c.satisfied) return false;
    return true;
}

bool DomainReport::ok(const std::string& set) const noexcept
{
    for (const auto& c : checks)
        if (c.set == set && !c.satisfied) return false;
    return true;
}

std::vector<ConstraintCheck> DomainReport::violations() const
{
    std::vector<ConstraintCheck> out;
    for (const auto& c : checks)
        if (!c.satisfied) out.push_back(c);
    return out;
}

DomainReport check_domains(const ParameterVector& p, const ModelDomain& domain, const std::optional<State>& x,
                           const std::optional<double>& u, const std::optional<Output>& y)
{
    using enum Param;
    DomainReport r;
    auto add = [&r](const char* set, std::string name, bool ok) { r.checks.push_back({set, std::move(name), ok}); };

    for (std::size_t i = 0; i < kNumParams; ++i)
        add("D_p", std::string(kParamNames[i]) + " >= 0", std::isfinite(p[i]) && p[i] >= 0.0);
    add("D_p", "a12 >= a123", p[a12] >= p[a123]);
    add("D_p", "a33m >= a33c", p[a33m] >= p[a33c]);
    add("D_p", "c12 * x_rg_max < 1", p[c12] * domain.x_rg_max < 1.0);

    if (x) {
        add("D_x", "x_rg >= 0", x->x_rg >= 0.0);
        add("D_x", "x_rg <= x_rg_max", x->x_rg <= domain.x_rg_max);
        add("D_x", "x_ta >= 0", x->x_ta >= 0.0);
        add("D_x", "x_ta <= 1", x->x_ta <= 1.0);
        add("D_x", "x_su >= 0", x->x_su >= 0.0);
        add("D_x", "x_su <= 1", x->x_su <= 1.0);
    }
    if (u) {
        add("D_u", "u >= 0", std::isfinite(*u) && *u >= 0.0);
        if (domain.u_max) add("D_u", "u <= u_max", *u <= *domain.u_max);
    }
    if (y) {
        add("D_y", "y_lambda >= 0", y->y_lambda >= 0.0);
        add("D_y", "y_sb >= 0", y->y_sb >= 0.0);
        add("D_y", "y_lambda >= g1(p, x_rg_max)", y->y_lambda >= -p[c11] * std::log(p[c12] * domain.x_rg_max));
        add("D_y", "y_sb <= c20", y->y_sb <= p[c20]);
        add("D_y", "y_sb >= c20 - c21", y->y_sb >= p[c20] - p[c21]);
    }
    return r;
}

void require_parameters(const ParameterVector& p, const ModelDomain& domain)
{
    const auto report = check_domains(p, domain);
    for (const auto& c : report.checks)
        if (!c.satisfied) throw DomainError(c.constraint);
}

StateDerivative system_rhs(const ParameterVector& p, const State& x, double u, const ModelDomain& domain)
{
    require_parameters(p, domain);
    require_state(x, domain);
    if (!(u >= 0.0)) throw DomainError("u >= 0", "u = " + std::to_string(u));
    return detail::rhs(p, x, u);
}

Output output(const ParameterVector& p, const State& x, const ModelDomain& domain)
{
    if (!(x.x_rg > 0.0)) throw SingularInputError("output: x_rg must be positive, log(c12 * x_rg) is undefined");
    require_state(x, domain);
    return detail::out(p, x);
}

MeasuredStates inverse_output(const ParameterVector& p, const Output& y)
{
    using enum Param;
    if (p[c11] == 0.0 || p[c12] == 0.0 || p[c21] == 0.0)
        throw DegenerateParameterError("inverse_output: c11, c12 and c21 must be nonzero");
    return {std::exp(-y.y_lambda / p[c11]) / p[c12], (p[c20] - y.y_sb) / p[c21]};
}

EquilibriumPoint static_pi(const ParameterVector& p, double x_rg_eq, const ModelDomain& domain)
{
    using enum Param;
    require_parameters(p, domain);
    if (!(x_rg_eq >= 0.0)) throw DomainError("x_rg >= 0");
    if (!(x_rg_eq <= domain.x_rg_max)) throw DomainError("x_rg <= x_rg_max");
    if (p[b] == 0.0) throw DegenerateParameterError("static_pi: b = 0 leaves the equilibrium inflow undetermined");
    if (p[a212] * x_rg_eq + p[a22] == 0.0)
        throw DegenerateParameterError("static_pi: pi_ta denominator a212*x_rg + a22 vanishes");

    const double x_ta = detail::pi_ta(p, x_rg_eq);
    const double den_su = p[a313] * x_rg_eq + p[a323] * x_ta + p[a33c] * x_ta + p[a33m] * (1.0 - x_ta);
    if (den_su == 0.0) throw DegenerateParameterError("static_pi: pi_su denominator vanishes");
    const double x_su = detail::pi_su(p, x_rg_eq, x_ta);
    const double u = detail::pi_u(p, x_rg_eq, x_ta, x_su);

    EquilibriumPoint e;
    e.u_eq = u;
    e.x_eq = {x_rg_eq, x_ta, x_su};
    // g1 diverges at x_rg = 0; report the limit
    e.y_eq = x_rg_eq > 0.0 ? detail::out(p, e.x_eq)
                           : Output{std::numeric_limits<double>::infinity(), p[c20] - p[c21] * x_ta};
    return e;
}

double min_y_lambda(const ParameterVector& p, const ModelDomain& domain)
{
    using enum Param;
    return -p[c11] * std::log(p[c12] * domain.x_rg_max);
}

StaticPhi static_phi(const ParameterVector& p, double y_lambda_eq, const ModelDomain& domain)
{
    if (!std::isfinite(y_lambda_eq) || y_lambda_eq < 0.0) throw DomainError("y_lambda >= 0");
    if (y_lambda_eq < min_y_lambda(p, domain)) throw DomainError("y_lambda >= g1(p, x_rg_max)");
    const auto x12 = inverse_output(p, Output{y_lambda_eq, 0.0});
    const auto eq = static_pi(p, std::min(x12.x_rg, domain.x_rg_max), domain);
    return {eq.u_eq, eq.x_eq.x_su, eq.y_eq.y_sb};
}

} // namespace sputter
