#pragma once

#include "sputter/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace sputter {

// Piecewise-constant input u(t) = u_k for t in [t_k, t_{k+1}).
class InputSignal {
public:
    struct Breakpoint {
        double t;
        double u;
    };

    explicit InputSignal(std::vector<Breakpoint> breakpoints);
    static InputSignal constant(double u) { return InputSignal({{0.0, u}}); }

    double value_at(double t) const noexcept;
    const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }

    // Pointwise shift u(t) + du, used to build ordered input pairs.
    InputSignal shifted(double du) const;

private:
    std::vector<Breakpoint> breakpoints_;
};

InputSignal read_input_schedule(const std::filesystem::path& path);

struct IntegratorSettings {
    double dt = 1e-3;
    double t_end = 20.0;
    double sample_interval = 0.0; // 0 means every integration step
    double clamp_tol = 1e-9;
};

struct Trajectory {
    double t0 = 0.0;
    double sample_interval = 0.0;
    std::vector<State> x;
    std::vector<Output> y;
    std::vector<double> u;
    bool x_rg_max_exceeded = false;
    double x_rg_peak = 0.0;

    std::size_t size() const noexcept { return x.size(); }
    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * sample_interval; }
};

// Lower clamp for x_rg when evaluating g1 inside simulations.
inline constexpr double kXrgFloor = 1e-12;

// Fixed-step classical RK4. Steps are split at input breakpoints so the input is
// constant within each stage evaluation. States are clamped back into
// [0, 1] x [0, 1] (x_rg >= 0) when the excursion is within clamp_tol.
Trajectory integrate(const ParameterVector& p, const State& x0, const InputSignal& u, const IntegratorSettings& settings,
                     const ModelDomain& domain = {});

// Equilibrium state for an initially measured y_lambda: x_rg from the inverse
// output, then x_ta and x_su from the static characteristic.
State equilibrium_init(const ParameterVector& p, double y_lambda_0, const ModelDomain& domain = {});

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

} // namespace sputter
