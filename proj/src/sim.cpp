#include "sputter/sim.hpp"

#include "sputter/csv.hpp"
#include "sputter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace sputter {

InputSignal::InputSignal(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints))
{
    if (breakpoints_.empty()) throw ValidationError("input signal: at least one breakpoint required");
    if (breakpoints_.front().t != 0.0) throw ValidationError("input signal: first breakpoint must be at t = 0");
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
        const auto& bp = breakpoints_[k];
        if (!std::isfinite(bp.t) || !std::isfinite(bp.u))
            throw ValidationError("input signal: non-finite breakpoint " + std::to_string(k));
        if (bp.u < 0.0) throw DomainError("u >= 0", "breakpoint " + std::to_string(k));
        if (k > 0 && !(bp.t > breakpoints_[k - 1].t))
            throw ValidationError("input signal: breakpoints must be strictly increasing (breakpoint "
                                  + std::to_string(k) + ")");
    }
}

double InputSignal::value_at(double t) const noexcept
{
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                                     [](double tt, const Breakpoint& bp) { return tt < bp.t; });
    if (it == breakpoints_.begin()) return breakpoints_.front().u;
    return std::prev(it)->u;
}

InputSignal InputSignal::shifted(double du) const
{
    auto bps = breakpoints_;
    for (auto& bp : bps) bp.u += du;
    return InputSignal(std::move(bps));
}

InputSignal read_input_schedule(const std::filesystem::path& path)
{
    const auto table = read_csv(path);
    const auto it = table.column_index("t");
    const auto iu = table.column_index("u");
    if (!it || !iu) throw DatasetError(path.string() + ": input schedule needs columns 't,u'");
    if (table.header.size() != 2) throw DatasetError(path.string() + ": input schedule has unexpected columns");
    std::vector<InputSignal::Breakpoint> bps;
    bps.reserve(table.rows.size());
    for (const auto& row : table.rows) bps.push_back({row[*it], row[*iu]});
    try {
        return InputSignal(std::move(bps));
    } catch (const ValidationError& e) {
        throw DatasetError(path.string() + ": " + e.what());
    }
}

namespace {

using Vec3 = std::array<double, 3>;

inline Vec3 axpy(const Vec3& x, double h, const Vec3& k) noexcept
{
    return {x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2]};
}

inline Vec3 rk4_step(const ParameterVector& p, const Vec3& x, double u, double h) noexcept
{
    auto f = [&](const Vec3& s) { return detail::rhs(p, State::from_array(s), u); };
    const Vec3 k1 = f(x);
    const Vec3 k2 = f(axpy(x, 0.5 * h, k1));
    const Vec3 k3 = f(axpy(x, 0.5 * h, k2));
    const Vec3 k4 = f(axpy(x, h, k3));
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

double clamp_component(double v, double lo, double hi, double tol, const char* name, double t)
{
    if (!std::isfinite(v)) throw IntegrationError(std::string("non-finite ") + name + " at t = " + std::to_string(t));
    if (v < lo) {
        if (v < lo - tol)
            throw IntegrationError(std::string(name) + " left its domain at t = " + std::to_string(t) + " (value "
                                   + std::to_string(v) + ")");
        return lo;
    }
    if (v > hi) {
        if (v > hi + tol)
            throw IntegrationError(std::string(name) + " left its domain at t = " + std::to_string(t) + " (value "
                                   + std::to_string(v) + ")");
        return hi;
    }
    return v;
}

Output sample_output(const ParameterVector& p, const State& x) noexcept
{
    State s = x;
    s.x_rg = std::max(s.x_rg, kXrgFloor);
    return detail::out(p, s);
}

} // namespace

Trajectory integrate(const ParameterVector& p, const State& x0, const InputSignal& u, const IntegratorSettings& settings,
                     const ModelDomain& domain)
{
    require_parameters(p, domain);
    const auto report = check_domains(p, domain, x0);
    for (const auto& c : report.checks)
        if (c.set == "D_x" && !c.satisfied) throw DomainError(c.constraint, "initial state");
    if (!(settings.dt > 0.0)) throw ValidationError("integrate: dt must be positive");
    if (!(settings.t_end >= settings.dt)) throw ValidationError("integrate: t_end must be >= dt");

    const double dt = settings.dt;
    const double interval = settings.sample_interval > 0.0 ? settings.sample_interval : dt;
    const double ratio = interval / dt;
    const auto steps_per_sample = static_cast<std::size_t>(std::llround(ratio));
    if (steps_per_sample == 0 || std::abs(ratio - static_cast<double>(steps_per_sample)) > 1e-9 * ratio)
        throw ValidationError("integrate: sample interval must be an integer multiple of dt");
    const auto n_samples = static_cast<std::size_t>(std::floor(settings.t_end / interval + 1e-9)) + 1;

    Trajectory traj;
    traj.t0 = 0.0;
    traj.sample_interval = interval;
    traj.x.reserve(n_samples);
    traj.y.reserve(n_samples);
    traj.u.reserve(n_samples);

    const auto& bps = u.breakpoints();
    std::size_t next_bp = 1; // index of the first breakpoint not yet passed
    Vec3 x = x0.to_array();
    traj.x_rg_peak = x[0];

    auto record = [&](double t) {
        const State s = State::from_array(x);
        traj.x.push_back(s);
        traj.y.push_back(sample_output(p, s));
        traj.u.push_back(u.value_at(t + 1e-9 * interval));
    };
    record(0.0);

    const double eps = 1e-9 * dt;
    const std::size_t total_steps = (n_samples - 1) * steps_per_sample;
    for (std::size_t j = 0; j < total_steps; ++j) {
        const double ta = static_cast<double>(j) * dt;
        const double tb = static_cast<double>(j + 1) * dt;

        while (next_bp < bps.size() && bps[next_bp].t <= ta + eps) ++next_bp;
        double s0 = ta;
        std::size_t k = next_bp;
        while (k < bps.size() && bps[k].t < tb - eps) {
            const double s1 = bps[k].t;
            x = rk4_step(p, x, u.value_at(0.5 * (s0 + s1)), s1 - s0);
            s0 = s1;
            ++k;
        }
        x = rk4_step(p, x, u.value_at(0.5 * (s0 + tb)), tb - s0);

        x[0] = clamp_component(x[0], 0.0, std::numeric_limits<double>::infinity(), settings.clamp_tol, "x_rg", tb);
        x[1] = clamp_component(x[1], 0.0, 1.0, settings.clamp_tol, "x_ta", tb);
        x[2] = clamp_component(x[2], 0.0, 1.0, settings.clamp_tol, "x_su", tb);
        traj.x_rg_peak = std::max(traj.x_rg_peak, x[0]);

        if ((j + 1) % steps_per_sample == 0) record(static_cast<double>((j + 1) / steps_per_sample) * interval);
    }
    traj.x_rg_max_exceeded = traj.x_rg_peak > domain.x_rg_max;
    return traj;
}

State equilibrium_init(const ParameterVector& p, double y_lambda_0, const ModelDomain& domain)
{
    if (!std::isfinite(y_lambda_0) || y_lambda_0 < 0.0) throw DomainError("y_lambda >= 0", "initial measurement");
    if (y_lambda_0 < min_y_lambda(p, domain)) throw DomainError("y_lambda >= g1(p, x_rg_max)", "initial measurement");
    const double x_rg = std::min(inverse_output(p, Output{y_lambda_0, 0.0}).x_rg, domain.x_rg_max);
    const auto eq = static_pi(p, x_rg, domain);
    return eq.x_eq;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    os << "t,u,x_rg,x_ta,x_su,y_lambda,y_sb\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        write_row(os, {traj.time(k), traj.u[k], traj.x[k].x_rg, traj.x[k].x_ta, traj.x[k].x_su, traj.y[k].y_lambda,
                       traj.y[k].y_sb});
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj)
{
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    write_trajectory_csv(out, traj);
}

} // namespace sputter
