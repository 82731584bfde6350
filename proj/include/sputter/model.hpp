#pragma once

#include "sputter/parameters.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace sputter {

struct State {
    double x_rg = 0.0;
    double x_ta = 0.0;
    double x_su = 0.0;

    std::array<double, 3> to_array() const noexcept { return {x_rg, x_ta, x_su}; }
    static State from_array(const std::array<double, 3>& a) noexcept { return {a[0], a[1], a[2]}; }
};

struct Output {
    double y_lambda = 0.0;
    double y_sb = 0.0;

    std::array<double, 2> to_array() const noexcept { return {y_lambda, y_sb}; }
};

using StateDerivative = std::array<double, 3>;

struct EquilibriumPoint {
    double u_eq = 0.0;
    State x_eq;
    Output y_eq;
};

// Measurable steady state, ordered as (u_eq, x_su_eq, y_sb_eq).
struct StaticPhi {
    double u_eq = 0.0;
    double x_su_eq = 0.0;
    double y_sb_eq = 0.0;

    std::array<double, 3> to_array() const noexcept { return {u_eq, x_su_eq, y_sb_eq}; }
};

// Inverse-output result: the first two state components.
struct MeasuredStates {
    double x_rg = 0.0;
    double x_ta = 0.0;
};

// System function f(p, x, u). Validates p in D_p, x in D_x and u >= 0.
StateDerivative system_rhs(const ParameterVector& p, const State& x, double u, const ModelDomain& domain = {});

// Output function g(p, x). Requires x_rg > 0.
Output output(const ParameterVector& p, const State& x, const ModelDomain& domain = {});

// Inverse of g with respect to (x_rg, x_ta).
MeasuredStates inverse_output(const ParameterVector& p, const Output& y);

// Static characteristic pi(p, x_rg_eq) with its output.
EquilibriumPoint static_pi(const ParameterVector& p, double x_rg_eq, const ModelDomain& domain = {});

// Measurable static characteristic phi(p, y_lambda_eq).
StaticPhi static_phi(const ParameterVector& p, double y_lambda_eq, const ModelDomain& domain = {});

// Lowest y_lambda reachable in D_x, i.e. g1(p, x_rg_max).
double min_y_lambda(const ParameterVector& p, const ModelDomain& domain);

namespace detail {
// Unchecked kernels used by the integrator and the finite-difference code.
StateDerivative rhs(const ParameterVector& p, const State& x, double u) noexcept;
Output out(const ParameterVector& p, const State& x) noexcept;
double pi_ta(const ParameterVector& p, double x_rg) noexcept;
double pi_su(const ParameterVector& p, double x_rg, double x_ta) noexcept;
double pi_u(const ParameterVector& p, double x_rg, double x_ta, double x_su) noexcept;
} // namespace detail

struct ConstraintCheck {
    std::string set;        // "D_p", "D_x", "D_u", "D_y"
    std::string constraint; // e.g. "a12 >= a123"
    bool satisfied = true;
};

struct DomainReport {
    std::vector<ConstraintCheck> checks;

    bool ok() const noexcept;
    bool ok(const std::string& set) const noexcept;
    std::vector<ConstraintCheck> violations() const;
};

// D_y is evaluated relative to p: y must lie in the image g(p, D_x) and be nonnegative.
DomainReport check_domains(const ParameterVector& p, const ModelDomain& domain,
                           const std::optional<State>& x = std::nullopt,
                           const std::optional<double>& u = std::nullopt,
                           const std::optional<Output>& y = std::nullopt);

// Throws DomainError for the first violated constraint of the requested set.
void require_parameters(const ParameterVector& p, const ModelDomain& domain);

} // namespace sputter
