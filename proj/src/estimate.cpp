#include "sputter/estimate.hpp"

#include "sputter/csv.hpp"
#include "sputter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace sputter {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<const char*, 3> kStaticChannels{"u_eq", "x_su_eq", "y_sb_eq"};
constexpr std::array<const char*, 2> kTrajectoryChannels{"y_lambda", "y_sb"};

const char* side_name(Side s) { return s == Side::a ? "a" : "b"; }

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

SearchDomain::SearchDomain(const ParameterVector& p0, double delta, const ModelDomain& domain) : p0_(p0), delta_(delta)
{
    using enum Param;
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("search domain: delta must lie in (0, 1)");
    require_parameters(p0, domain);
    if (lower(index(a12)) < upper(index(a123)))
        throw DomainError("a12 >= a123", "search box at delta = " + fmt(delta));
    if (lower(index(a33m)) < upper(index(a33c)))
        throw DomainError("a33m >= a33c", "search box at delta = " + fmt(delta));
}

double SearchDomain::lower(std::size_t i) const noexcept
{
    return is_pinned(i) ? p0_[i] : (1.0 - delta_) * p0_[i];
}

double SearchDomain::upper(std::size_t i) const noexcept
{
    return is_pinned(i) ? p0_[i] : (1.0 + delta_) * p0_[i];
}

ParameterVector SearchDomain::corner(Side side) const
{
    const auto r = orders::r_p();
    ParameterVector p = p0_;
    const double dir = side == Side::a ? -1.0 : 1.0;
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (!is_pinned(i)) p[i] = (1.0 + dir * delta_ * r[i]) * p0_[i];
    return p;
}

bool SearchDomain::contains(const ParameterVector& p) const noexcept
{
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (!(p[i] >= lower(i) && p[i] <= upper(i))) return false;
    return true;
}

bool SearchDomain::in_cone(const ParameterVector& p, Side side) const
{
    if (!contains(p)) return false;
    const auto r = orders::r_p();
    return side == Side::a ? ordered(r, p.view(), p0_.view()) : ordered(r, p0_.view(), p.view());
}

CostWeights CostWeights::from_dataset(const MeasurementDataset& data)
{
    CostWeights w;
    for (const auto& r : data.steady.rows) w.steady.push_back(r.weights);
    for (const auto& t : data.trajectories) {
        auto& v = w.trajectory.emplace_back();
        for (const auto& r : t.rows) v.push_back(r.weights);
    }
    return w;
}

void CostWeights::validate(const MeasurementDataset& data) const
{
    if (steady.size() != data.steady.rows.size()) throw ValidationError("weights: steady-state row count mismatch");
    if (trajectory.size() != data.trajectories.size()) throw ValidationError("weights: trajectory count mismatch");
    if (!data.steady.empty()) {
        for (std::size_t q = 0; q < 3; ++q) {
            if (q == 0 && !data.steady.has_u_eq) continue;
            const bool any = std::any_of(steady.begin(), steady.end(), [q](const auto& w) { return w[q] > 0.0; });
            if (!any) throw ValidationError(std::string("weights: channel ") + kStaticChannels[q] + " has no positive weight");
        }
    }
    for (std::size_t j = 0; j < trajectory.size(); ++j) {
        if (trajectory[j].size() != data.trajectories[j].rows.size())
            throw ValidationError("weights: trajectory sample count mismatch");
        for (std::size_t q = 0; q < 2; ++q) {
            const bool any = std::any_of(trajectory[j].begin(), trajectory[j].end(), [q](const auto& w) { return w[q] > 0.0; });
            if (!any)
                throw ValidationError(std::string("weights: trajectory channel ") + kTrajectoryChannels[q]
                                      + " has no positive weight");
        }
    }
}

Trajectory simulate_experiment(const ParameterVector& p, const TrajectoryDataset& data,
                               const IntegratorSettings& integrator, const ModelDomain& domain)
{
    if (data.rows.size() < 2) throw DatasetError("trajectory dataset needs at least two samples");
    IntegratorSettings is = integrator;
    is.sample_interval = data.sampling_time;
    is.t_end = data.duration();
    const State x0 = equilibrium_init(p, data.rows.front().y_lambda, domain);
    auto traj = integrate(p, x0, data.input(), is, domain);
    if (traj.size() != data.rows.size()) throw IntegrationError("simulated grid does not match the measured grid");
    return traj;
}

double cost_static(const ParameterVector& p, const SteadyStateDataset& data, const CostWeights& weights,
                   const ModelDomain& domain)
{
    if (weights.steady.size() != data.rows.size()) throw ValidationError("weights: steady-state row count mismatch");
    double j = 0.0;
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& row = data.rows[k];
        const auto model = static_phi(p, row.y_lambda_eq, domain).to_array();
        const auto meas = row.phi();
        for (std::size_t q = 0; q < 3; ++q) {
            if (q == 0 && !data.has_u_eq) continue;
            const double d = meas[q] - model[q];
            j += d * d * weights.steady[k][q];
        }
    }
    return j;
}

double cost_trajectory(const ParameterVector& p, const MeasurementDataset& data, const CostWeights& weights,
                       const IntegratorSettings& integrator, const ModelDomain& domain)
{
    if (weights.trajectory.size() != data.trajectories.size()) throw ValidationError("weights: trajectory count mismatch");
    double j = 0.0;
    for (std::size_t n = 0; n < data.trajectories.size(); ++n) {
        const auto& td = data.trajectories[n];
        const auto traj = simulate_experiment(p, td, integrator, domain);
        for (std::size_t k = 0; k < td.rows.size(); ++k) {
            const double d0 = td.rows[k].y_lambda - traj.y[k].y_lambda;
            const double d1 = td.rows[k].y_sb - traj.y[k].y_sb;
            j += d0 * d0 * weights.trajectory[n][k][0] + d1 * d1 * weights.trajectory[n][k][1];
        }
    }
    return j;
}

CandidateEvaluation evaluate_candidate(const ParameterVector& p, Side side, const MeasurementDataset& data,
                                       const CostWeights& weights, const EstimationSettings& settings)
{
    CandidateEvaluation ev;
    auto& cert = ev.certificate;
    cert.static_margin.fill(kInf);
    cert.trajectory_margin.fill(kInf);
    const double sgn = side == Side::a ? 1.0 : -1.0;

    const auto r_phi = orders::r_phi();
    for (std::size_t k = 0; k < data.steady.rows.size(); ++k) {
        const auto& row = data.steady.rows[k];
        const auto model = static_phi(p, row.y_lambda_eq, settings.domain).to_array();
        const auto meas = row.phi();
        for (std::size_t q = 0; q < 3; ++q) {
            if (q == 0 && !data.steady.has_u_eq) continue;
            const double d = meas[q] - model[q];
            ev.cost_static += d * d * weights.steady[k][q];
            // side a: phi(p) <=_r phi^M, side b: phi^M <=_r phi(p)
            const double margin = -sgn * r_phi[q] * (model[q] - meas[q]);
            cert.static_margin[q] = std::min(cert.static_margin[q], margin);
            if (!(margin >= -settings.tau_static) && cert.feasible) {
                cert.feasible = false;
                cert.first_violation = "steady-state point " + std::to_string(k) + " (y_lambda_eq = "
                                       + fmt(row.y_lambda_eq) + "), channel " + kStaticChannels[q] + ", margin "
                                       + fmt(margin);
            }
        }
    }

    const auto r_y = orders::r_y();
    for (std::size_t n = 0; n < data.trajectories.size(); ++n) {
        const auto& td = data.trajectories[n];
        const auto traj = simulate_experiment(p, td, settings.integrator, settings.domain);
        for (std::size_t k = 0; k < td.rows.size(); ++k) {
            const std::array<double, 2> model{traj.y[k].y_lambda, traj.y[k].y_sb};
            const std::array<double, 2> meas{td.rows[k].y_lambda, td.rows[k].y_sb};
            for (std::size_t q = 0; q < 2; ++q) {
                const double d = meas[q] - model[q];
                ev.cost_trajectory += d * d * weights.trajectory[n][k][q];
                const double margin = -sgn * r_y[q] * (model[q] - meas[q]);
                cert.trajectory_margin[q] = std::min(cert.trajectory_margin[q], margin);
                if (!(margin >= -settings.tau_enc) && cert.feasible) {
                    cert.feasible = false;
                    cert.first_violation = "trajectory " + std::to_string(n) + " sample " + std::to_string(k)
                                           + " (t = " + fmt(td.rows[k].t) + "), channel " + kTrajectoryChannels[q]
                                           + ", margin " + fmt(margin);
                }
            }
        }
    }
    return ev;
}

ExpansionResult expand_until_feasible(const ParameterVector& p0, const MeasurementDataset& data,
                                      const CostWeights& weights, const EstimationSettings& settings)
{
    if (!(settings.delta0 > 0.0)) throw ValidationError("expand: delta0 must be positive");
    if (!(settings.growth > 1.0)) throw ValidationError("expand: growth factor must exceed 1");

    ExpansionResult res;
    std::string last_violation = "none tested";
    for (double delta = settings.delta0; delta <= settings.delta_max; delta *= settings.growth) {
        std::optional<SearchDomain> box;
        try {
            box.emplace(p0, delta, settings.domain);
        } catch (const DomainError& e) {
            throw InfeasibleError("search box leaves D_p at delta = " + fmt(delta) + ": " + e.constraint()
                                  + "; last enclosure violation: " + last_violation);
        }
        const auto pa = box->corner(Side::a);
        const auto pb = box->corner(Side::b);
        ++res.probes;
        const auto ea = evaluate_candidate(pa, Side::a, data, weights, settings);
        if (!ea.certificate.feasible) {
            last_violation = "side a at delta = " + fmt(delta) + ": " + ea.certificate.first_violation;
            continue;
        }
        const auto eb = evaluate_candidate(pb, Side::b, data, weights, settings);
        if (!eb.certificate.feasible) {
            last_violation = "side b at delta = " + fmt(delta) + ": " + eb.certificate.first_violation;
            continue;
        }
        res.delta = delta;
        res.p_a = pa;
        res.p_b = pb;
        return res;
    }
    throw InfeasibleError("no enclosing parameter box up to delta_max = " + fmt(settings.delta_max)
                          + "; last violation: " + last_violation);
}

ContractionResult contract(Side side, const ParameterVector& p_start, const ParameterVector& p0,
                           const MeasurementDataset& data, const CostWeights& weights,
                           const EstimationSettings& settings)
{
    const auto r = orders::r_p();
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (is_pinned(i) && p_start[i] != p0[i])
            throw ValidationError(std::string("contract: pinned coordinate ") + std::string(kParamNames[i])
                                  + " differs from nominal");
    const bool in_cone = side == Side::a ? ordered(r, p_start.view(), p0.view()) : ordered(r, p0.view(), p_start.view());
    if (!in_cone) throw ValidationError(std::string("contract: start point is not in cone D_p^") + side_name(side));

    ContractionResult res;
    auto eval = [&](const ParameterVector& p) {
        ++res.evaluations;
        return evaluate_candidate(p, side, data, weights, settings);
    };

    res.evaluation = eval(p_start);
    if (!res.evaluation.certificate.feasible)
        throw InfeasibleError(std::string("contract: start point on side ") + side_name(side)
                              + " violates the enclosure: " + res.evaluation.certificate.first_violation);
    res.start_cost = res.evaluation.cost();
    res.p = p_start;

    // (i) ray from the start point toward p0
    auto on_ray = [&](double t) {
        ParameterVector p = p_start;
        for (std::size_t i = 0; i < kNumParams; ++i)
            if (!is_pinned(i)) p[i] = p_start[i] + t * (p0[i] - p_start[i]);
        return p;
    };
    double span = 0.0;
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (!is_pinned(i) && p0[i] != 0.0) span = std::max(span, std::abs(p0[i] - p_start[i]) / std::abs(p0[i]));

    if (span > 0.0) {
        const auto at_end = eval(p0);
        if (at_end.certificate.feasible) {
            res.p = p0;
            res.evaluation = at_end;
            res.ray_t = 1.0;
        } else {
            double lo = 0.0, hi = 1.0;
            while ((hi - lo) * span > settings.eps_c) {
                const double mid = 0.5 * (lo + hi);
                const auto p = on_ray(mid);
                auto ev = eval(p);
                if (ev.certificate.feasible) {
                    lo = mid;
                    res.p = p;
                    res.evaluation = std::move(ev);
                } else {
                    hi = mid;
                }
            }
            res.ray_t = lo;
        }
    }

    // (ii) cyclic coordinate-wise bisection toward p0, parameter order
    for (int cycle = 1; cycle <= settings.max_cycles; ++cycle) {
        res.cycles = cycle;
        double max_move = 0.0;
        for (std::size_t i = 0; i < kNumParams; ++i) {
            if (is_pinned(i) || res.p[i] == p0[i]) continue;
            const double scale = p0[i] != 0.0 ? std::abs(p0[i]) : 1.0;
            const double tol = settings.eps_c * scale;
            const double start = res.p[i];
            double lo = start, hi = p0[i];
            if (std::abs(hi - lo) <= tol) continue;

            auto with = [&](double v) {
                ParameterVector p = res.p;
                p[i] = v;
                return p;
            };

            // one resolution step first: most coordinates are already blocked after the first cycle
            const double first = cycle == 1 ? hi : lo + std::copysign(tol, hi - lo);
            {
                const auto p = with(first);
                auto ev = eval(p);
                if (ev.certificate.feasible) {
                    lo = first;
                    res.p = p;
                    res.evaluation = std::move(ev);
                } else {
                    hi = first;
                }
            }
            while (std::abs(hi - lo) > tol) {
                const double mid = 0.5 * (lo + hi);
                const auto p = with(mid);
                auto ev = eval(p);
                if (ev.certificate.feasible) {
                    lo = mid;
                    res.p = p;
                    res.evaluation = std::move(ev);
                } else {
                    hi = mid;
                }
            }
            max_move = std::max(max_move, std::abs(lo - start) / scale);
        }
        if (max_move < settings.eps_c) break;
    }
    return res;
}

double average_relative_width(const ParameterVector& a, const ParameterVector& b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < kNumParams; ++i) {
        const double den = std::abs(b[i] + a[i]);
        if (den > 0.0) sum += std::abs(b[i] - a[i]) * 2.0 / den;
    }
    return sum / static_cast<double>(kNumParams);
}

IntervalEstimate estimate_interval(const ParameterVector& p0, const MeasurementDataset& data,
                                   const EstimationSettings& settings)
{
    return estimate_interval(p0, data, CostWeights::from_dataset(data), settings);
}

IntervalEstimate estimate_interval(const ParameterVector& p0, const MeasurementDataset& data, const CostWeights& weights,
                                   const EstimationSettings& settings)
{
    if (data.steady.empty() && data.trajectories.empty()) throw DatasetError("estimate: dataset is empty");
    require_parameters(p0, settings.domain);
    weights.validate(data);

    IntervalEstimate est;
    est.warnings = data.steady.warnings;

    const auto expansion = expand_until_feasible(p0, data, weights, settings);
    est.delta = expansion.delta;
    est.evaluations = 2 * expansion.probes;

    const auto ca = contract(Side::a, expansion.p_a, p0, data, weights, settings);
    const auto cb = contract(Side::b, expansion.p_b, p0, data, weights, settings);
    est.evaluations += ca.evaluations + cb.evaluations;
    est.p_hat_a = ca.p;
    est.p_hat_b = cb.p;

    // independent re-check of the final pair
    const auto fa = evaluate_candidate(est.p_hat_a, Side::a, data, weights, settings);
    const auto fb = evaluate_candidate(est.p_hat_b, Side::b, data, weights, settings);
    est.evaluations += 2;
    est.certificate_a = fa.certificate;
    est.certificate_b = fb.certificate;
    est.cost_a = fa.cost();
    est.cost_b = fb.cost();
    est.ordered = ordered(orders::r_p(), est.p_hat_a.view(), est.p_hat_b.view());
    est.width = average_relative_width(est.p_hat_a, est.p_hat_b);
    return est;
}

void write_certificate_report(std::ostream& os, const IntervalEstimate& est)
{
    auto margin = [](double m) { return std::isinf(m) ? std::string("n/a") : format_double(m); };
    os << "delta = " << format_double(est.delta) << '\n';
    os << "average_relative_width = " << format_double(est.width) << '\n';
    os << "ordered_r_p = " << (est.ordered ? "true" : "false") << '\n';
    for (Side s : {Side::a, Side::b}) {
        const auto& c = s == Side::a ? est.certificate_a : est.certificate_b;
        os << "side " << side_name(s) << ": " << (c.feasible ? "PASS" : "FAIL")
           << " cost = " << format_double(s == Side::a ? est.cost_a : est.cost_b) << '\n';
        for (std::size_t q = 0; q < 3; ++q) os << "  static " << kStaticChannels[q] << " margin = " << margin(c.static_margin[q]) << '\n';
        for (std::size_t q = 0; q < 2; ++q)
            os << "  trajectory " << kTrajectoryChannels[q] << " margin = " << margin(c.trajectory_margin[q]) << '\n';
        if (!c.feasible) os << "  violation: " << c.first_violation << '\n';
    }
    os << "parameter,p_hat_a,p_hat_b,relative_width\n";
    for (std::size_t i = 0; i < kNumParams; ++i) {
        const double a = est.p_hat_a[i], b = est.p_hat_b[i];
        const double den = std::abs(a + b);
        os << kParamNames[i] << ',' << format_double(a) << ',' << format_double(b) << ','
           << format_double(den > 0.0 ? 2.0 * std::abs(b - a) / den : 0.0) << '\n';
    }
    for (const auto& w : est.warnings) os << "warning: " << w << '\n';
}

void write_static_envelope(std::ostream& os, const IntervalEstimate& est, const std::vector<double>& grid,
                           const ModelDomain& domain)
{
    os << "y_lambda_eq,u_a,u_b,x_su_a,x_su_b,y_sb_a,y_sb_b\n";
    for (double y : grid) {
        const auto a = static_phi(est.p_hat_a, y, domain);
        const auto b = static_phi(est.p_hat_b, y, domain);
        write_row(os, {y, a.u_eq, b.u_eq, a.x_su_eq, b.x_su_eq, a.y_sb_eq, b.y_sb_eq});
    }
}

void write_trajectory_envelope(std::ostream& os, const IntervalEstimate& est, const TrajectoryDataset& data,
                               const IntegratorSettings& integrator, const ModelDomain& domain)
{
    const auto ta = simulate_experiment(est.p_hat_a, data, integrator, domain);
    const auto tb = simulate_experiment(est.p_hat_b, data, integrator, domain);
    os << "t,u,y_lambda_m,y_lambda_a,y_lambda_b,y_sb_m,y_sb_a,y_sb_b\n";
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
        const auto& r = data.rows[k];
        write_row(os, {r.t, r.u, r.y_lambda, ta.y[k].y_lambda, tb.y[k].y_lambda, r.y_sb, ta.y[k].y_sb, tb.y[k].y_sb});
    }
}

} // namespace sputter
