#include "sputter/analysis.hpp"

#include "sputter/errors.hpp"
#include "sputter/order.hpp"
#include "sputter/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sputter {

char sign_char(Sign s) noexcept
{
    switch (s) {
    case Sign::minus: return '-';
    case Sign::zero: return '0';
    case Sign::plus: return '+';
    case Sign::undefined: return '*';
    }
    return '?';
}

SignPattern::SignPattern(std::size_t rows, std::size_t cols, Sign fill)
    : rows_(rows), cols_(cols), cells_(rows * cols, fill)
{
}

SignPattern SignPattern::parse(std::string_view text)
{
    std::vector<std::vector<Sign>> rows(1);
    for (char c : text) {
        switch (c) {
        case ';': rows.emplace_back(); break;
        case '-': rows.back().push_back(Sign::minus); break;
        case '0': rows.back().push_back(Sign::zero); break;
        case '+': rows.back().push_back(Sign::plus); break;
        case '*': rows.back().push_back(Sign::undefined); break;
        case ' ': break;
        default: throw std::invalid_argument(std::string("sign pattern: bad character '") + c + "'");
        }
    }
    const std::size_t cols = rows.front().size();
    if (cols == 0) throw std::invalid_argument("sign pattern: empty row");
    SignPattern sp(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("sign pattern: ragged rows");
        for (std::size_t j = 0; j < cols; ++j) sp.set(i, j, rows[i][j]);
    }
    return sp;
}

std::string SignPattern::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) s += ';';
        for (std::size_t j = 0; j < cols_; ++j) s += sign_char(at(i, j));
    }
    return s;
}

Matrix jacobian_fd(const VectorMap& map, std::span<const double> point, double h, std::span<const std::size_t> wrt)
{
    std::vector<std::size_t> cols(wrt.begin(), wrt.end());
    if (cols.empty())
        for (std::size_t j = 0; j < point.size(); ++j) cols.push_back(j);

    std::vector<double> z(point.begin(), point.end());
    const std::size_t m = map(z).size();
    Matrix jac{m, cols.size(), std::vector<double>(m * cols.size())};
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::size_t j = cols[k];
        if (j >= z.size()) throw std::invalid_argument("jacobian_fd: coordinate out of range");
        const double step = h * std::max(1.0, std::abs(point[j]));
        z[j] = point[j] + step;
        const auto fp = map(z);
        z[j] = point[j] - step;
        const auto fm = map(z);
        z[j] = point[j];
        if (fp.size() != m || fm.size() != m) throw std::invalid_argument("jacobian_fd: map output size changed");
        for (std::size_t i = 0; i < m; ++i) jac(i, k) = (fp[i] - fm[i]) / (2.0 * step);
    }
    return jac;
}

const char* verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

constexpr std::size_t kKeptMismatches = 5;
constexpr int kMaxRejections = 1000;

std::vector<double> draw(Rng& rng, const std::vector<std::pair<double, double>>& bounds)
{
    std::vector<double> z;
    z.reserve(bounds.size());
    for (const auto& [lo, hi] : bounds) z.push_back(rng.uniform(lo, hi));
    return z;
}

} // namespace

SignCertification certify_sign_pattern(const std::string& name, const VectorMap& map, const SampledDomain& domain,
                                       const SignPattern& expected, const SignCheckOptions& options)
{
    if (domain.samples == 0) throw std::invalid_argument("certify_sign_pattern: need at least one sample");
    const std::size_t ncols = options.wrt.empty() ? domain.bounds.size() : options.wrt.size();
    if (expected.cols() != ncols) throw std::invalid_argument("certify_sign_pattern: column count mismatch for " + name);

    SignCertification cert;
    cert.name = name;
    cert.expected = expected;
    const std::size_t rows = expected.rows(), cols = expected.cols();
    std::vector<std::array<bool, 3>> seen(rows * cols, {false, false, false}); // minus, zero, plus
    std::vector<CellWitness> witness;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (expected.at(i, j) == Sign::undefined) witness.push_back({i, j, std::nullopt, std::nullopt});

    Rng rng(domain.seed);
    while (cert.samples < domain.samples) {
        auto z = draw(rng, domain.bounds);
        if (options.accept && !options.accept(z)) {
            if (++cert.rejected > kMaxRejections * domain.samples)
                throw ValidationError("certify_sign_pattern: sampled set for " + name + " is almost empty");
            continue;
        }
        const auto jac = jacobian_fd(map, z, options.h, options.wrt);
        if (jac.rows != rows) throw std::invalid_argument("certify_sign_pattern: row count mismatch for " + name);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const double v = jac(i, j);
                const int cls = std::abs(v) <= options.zero_tol ? 0 : (v > 0.0 ? 1 : -1);
                seen[i * cols + j][cls + 1] = true;
                const Sign e = expected.at(i, j);
                bool ok = true;
                switch (e) {
                case Sign::plus: ok = cls >= 0; break;
                case Sign::minus: ok = cls <= 0; break;
                case Sign::zero: ok = cls == 0; break;
                case Sign::undefined:
                    for (auto& w : witness) {
                        if (w.row != i || w.col != j) continue;
                        if (cls > 0 && !w.plus_point) w.plus_point = z;
                        if (cls < 0 && !w.minus_point) w.minus_point = z;
                    }
                    break;
                }
                if (!ok) {
                    ++cert.mismatch_count;
                    if (cert.mismatches.size() < kKeptMismatches) cert.mismatches.push_back({cert.samples, i, j, v, z});
                }
            }
        }
        ++cert.samples;
    }

    cert.observed = SignPattern(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& s = seen[i * cols + j];
            cert.observed.set(i, j, s[0] && s[2] ? Sign::undefined : s[2] ? Sign::plus : s[0] ? Sign::minus : Sign::zero);
        }
    }
    cert.undefined_witnesses = std::move(witness);
    if (cert.mismatch_count > 0)
        cert.verdict = Verdict::fail;
    else if (std::any_of(cert.undefined_witnesses.begin(), cert.undefined_witnesses.end(),
                         [](const CellWitness& w) { return !w.plus_point || !w.minus_point; }))
        cert.verdict = Verdict::inconclusive;
    else
        cert.verdict = Verdict::pass;
    return cert;
}

namespace {

ParameterVector params_of(std::span<const double> z)
{
    ParameterVector p;
    for (std::size_t i = 0; i < kNumParams; ++i) p[i] = z[i];
    return p;
}

std::vector<std::pair<double, double>> parameter_bounds(const ParameterVector& p, double pert)
{
    std::vector<std::pair<double, double>> b;
    for (std::size_t i = 0; i < kNumParams; ++i) {
        const double lo = (1.0 - pert) * p[i], hi = (1.0 + pert) * p[i];
        b.emplace_back(std::min(lo, hi), std::max(lo, hi));
    }
    return b;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to)
{
    std::vector<std::size_t> v;
    for (std::size_t i = from; i < to; ++i) v.push_back(i);
    return v;
}

} // namespace

std::vector<SignCertification> certify_all_patterns(const ParameterVector& p, const AnalysisSettings& settings,
                                                    const ModelDomain& domain)
{
    constexpr double m = 1e-3; // distance kept from the boundary of D_x
    const double xr_hi = domain.x_rg_max * (1.0 - m);
    const auto pb = parameter_bounds(p, settings.perturbation);
    std::uint64_t seed = settings.seed;
    std::vector<SignCertification> out;

    auto p_ok = [domain](std::span<const double> z) { return check_domains(params_of(z), domain).ok("D_p"); };

    auto with = [&](std::vector<std::pair<double, double>> extra) {
        auto b = pb;
        b.insert(b.end(), extra.begin(), extra.end());
        return SampledDomain{settings.samples, std::move(b), seed++};
    };
    auto options = [&](std::vector<std::size_t> wrt, std::function<bool(std::span<const double>)> accept) {
        return SignCheckOptions{settings.zero_tol, settings.h, std::move(wrt), std::move(accept)};
    };

    // z = (p, x_rg, x_ta, x_su, u)
    const auto full = with({{m, xr_hi}, {m, 1.0 - m}, {m, 1.0 - m}, {m, 2.0}});
    const VectorMap f_map = [](std::span<const double> z) {
        const auto d = detail::rhs(params_of(z), State{z[16], z[17], z[18]}, z[19]);
        return std::vector<double>(d.begin(), d.end());
    };
    const VectorMap g_map = [](std::span<const double> z) {
        const auto y = detail::out(params_of(z), State{z[16], z[17], 0.0});
        return std::vector<double>{y.y_lambda, y.y_sb};
    };
    // z = (p, x_rg) with x_ta, x_su on the static characteristic
    const VectorMap pi_map = [](std::span<const double> z) {
        const auto p = params_of(z);
        const double xta = detail::pi_ta(p, z[16]);
        const double xsu = detail::pi_su(p, z[16], xta);
        return std::vector<double>{detail::pi_u(p, z[16], xta, xsu), xta, xsu};
    };
    auto pi_ok = [p_ok, pi_map](std::span<const double> z) { return p_ok(z) && pi_map(z)[0] >= 0.0; };

    {
        auto d = with({{m, xr_hi}, {m, 1.0 - m}});
        out.push_back(certify_sign_pattern("output_wrt_measured_states", g_map, d, SignPattern::parse("-0;0-"),
                                           options({16, 17}, p_ok)));
    }
    {
        // z = (p, y_lambda, y_sb)
        auto d = with({{1.5, 6.0}, {3.8, 4.4}});
        const VectorMap inv = [](std::span<const double> z) {
            const auto x = inverse_output(params_of(z), Output{z[16], z[17]});
            return std::vector<double>{x.x_rg, x.x_ta};
        };
        auto ok = [p_ok, inv, domain](std::span<const double> z) {
            if (!p_ok(z)) return false;
            const auto x = inv(z);
            return x[0] > 0.0 && x[0] <= domain.x_rg_max && x[1] >= 0.0 && x[1] <= 1.0;
        };
        out.push_back(certify_sign_pattern("inverse_output_wrt_outputs", inv, d, SignPattern::parse("-0;0-"),
                                           options({16, 17}, ok)));
    }
    {
        auto d = full;
        d.seed = seed++;
        out.push_back(certify_sign_pattern("system_wrt_state", f_map, d, SignPattern::parse("-++;+-+;++-"),
                                           options({16, 17, 18}, p_ok)));
    }
    {
        auto d = full;
        d.seed = seed++;
        out.push_back(certify_sign_pattern("system_wrt_input", f_map, d, SignPattern::parse("+;0;0"),
                                           options({19}, p_ok)));
    }
    {
        auto d = with({{m, xr_hi}});
        out.push_back(certify_sign_pattern("static_characteristic_wrt_x_rg", pi_map, d, SignPattern::parse("*;+;+"),
                                           options({16}, pi_ok)));
    }
    {
        auto d = full;
        d.seed = seed++;
        d.bounds.pop_back();
        const VectorMap u_map = [](std::span<const double> z) {
            return std::vector<double>{detail::pi_u(params_of(z), z[16], z[17], z[18])};
        };
        out.push_back(certify_sign_pattern("equilibrium_inflow_wrt_state", u_map, d, SignPattern::parse("+--"),
                                           options({16, 17, 18}, p_ok)));
    }
    {
        auto d = with({{m, xr_hi}, {m, 1.0 - m}});
        out.push_back(certify_sign_pattern("output_wrt_parameters", g_map, d,
                                           SignPattern::parse("000000000000+-00;00000000000000+-"),
                                           options(range(0, kNumParams), p_ok)));
    }
    {
        auto d = full;
        d.seed = seed++;
        out.push_back(certify_sign_pattern(
            "system_wrt_parameters", f_map, d,
            SignPattern::parse("---+-000000+0000;00000+-000000000;0000000++--00000"),
            options(range(0, kNumParams), p_ok)));
    }
    {
        auto d = with({{m, xr_hi}});
        out.push_back(certify_sign_pattern(
            "static_characteristic_wrt_parameters", pi_map, d,
            SignPattern::parse("+++-+-+--++-0000;00000+-000000000;00000+-++--00000"),
            options(range(0, kNumParams), pi_ok)));
    }
    {
        // phi(p, y_lambda) over the free parameters; expected sign r_phi_i * r_p_j
        const auto r_phi = orders::r_phi();
        const auto r_p = orders::r_p();
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < kNumParams; ++j)
            if (j != index(Param::c11) && j != index(Param::c12)) free.push_back(j);
        SignPattern expected(3, free.size());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < free.size(); ++k) {
                const int s = r_phi[i] * r_p[free[k]];
                expected.set(i, k, s > 0 ? Sign::plus : s < 0 ? Sign::minus : Sign::zero);
            }
        const VectorMap phi_map = [domain](std::span<const double> z) {
            const auto phi = static_phi(params_of(z), z[16], domain);
            return std::vector<double>{phi.u_eq, phi.x_su_eq, phi.y_sb_eq};
        };
        auto ok = [p_ok, domain](std::span<const double> z) {
            if (!p_ok(z)) return false;
            const auto p = params_of(z);
            if (z[16] < min_y_lambda(p, domain) + 1e-3) return false;
            return static_phi(p, z[16], domain).u_eq >= 0.0;
        };
        auto d = with({{settings.y_lambda_min, settings.y_lambda_max}});
        out.push_back(certify_sign_pattern("measurable_static_characteristic_order", phi_map, d, expected,
                                           options(free, ok)));
    }
    return out;
}

namespace {

ParameterVector draw_parameters(Rng& rng, const std::vector<std::pair<double, double>>& bounds,
                                const ModelDomain& domain)
{
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const auto z = draw(rng, bounds);
        const auto p = params_of(z);
        if (check_domains(p, domain).ok("D_p")) return p;
    }
    throw ValidationError("sampled parameter box has almost no points in D_p");
}

// Random piecewise-constant input pair u^a <= u^b on [0, t_end).
std::pair<InputSignal, InputSignal> draw_inputs(Rng& rng, double t_end, double max_gap)
{
    std::vector<double> times{0.0};
    for (int k = 0; k < 3; ++k) times.push_back(rng.uniform(0.05, 0.95) * t_end);
    std::sort(times.begin(), times.end());
    std::vector<InputSignal::Breakpoint> a, b;
    for (double t : times) {
        if (!a.empty() && t <= a.back().t) continue;
        const double u = rng.uniform(0.1, 1.2);
        a.push_back({t, u});
        b.push_back({t, u + rng.uniform(0.0, max_gap)});
    }
    return {InputSignal(std::move(a)), InputSignal(std::move(b))};
}

std::string describe(std::size_t pair, double t, std::size_t comp, double v)
{
    std::ostringstream os;
    os.precision(6);
    os << "pair " << pair << ", t = " << t << ", component " << comp << ", violation " << v;
    return os.str();
}

void finish(OrderCheck& c, double tol)
{
    c.verdict = c.worst_violation <= tol ? Verdict::pass : Verdict::fail;
}

IntegratorSettings sim_settings(const AnalysisSettings& s)
{
    IntegratorSettings is;
    is.dt = s.dt;
    is.t_end = s.t_end;
    is.sample_interval = s.dt;
    return is;
}

} // namespace

OrderCheck certify_cooperativity(const ParameterVector& p, const AnalysisSettings& settings, const ModelDomain& domain)
{
    require_parameters(p, domain);
    OrderCheck c;
    c.name = "cooperativity";
    c.worst_violation = -std::numeric_limits<double>::infinity();
    Rng rng(settings.seed + 1000);
    const auto pb = parameter_bounds(p, settings.perturbation);
    const auto is = sim_settings(settings);
    for (std::size_t n = 0; n < settings.pairs; ++n) {
        const auto q = draw_parameters(rng, pb, domain);
        State xa{rng.uniform(0.01, 0.8) * domain.x_rg_max, rng.uniform(0.0, 0.9), rng.uniform(0.0, 0.9)};
        State xb{std::min(domain.x_rg_max, xa.x_rg + rng.uniform(0.0, 0.1)), std::min(1.0, xa.x_ta + rng.uniform(0.0, 0.1)),
                 std::min(1.0, xa.x_su + rng.uniform(0.0, 0.1))};
        const auto [ua, ub] = draw_inputs(rng, settings.t_end, 0.2);
        const auto ta = integrate(q, xa, ua, is, domain);
        const auto tb = integrate(q, xb, ub, is, domain);
        c.grid_points = ta.size();
        for (std::size_t k = 0; k < ta.size(); ++k) {
            const auto a = ta.x[k].to_array(), b = tb.x[k].to_array();
            for (std::size_t i = 0; i < 3; ++i) {
                const double v = a[i] - b[i];
                if (v > c.worst_violation) {
                    c.worst_violation = v;
                    c.witness = describe(n, ta.time(k), i, v);
                }
            }
        }
        ++c.pairs;
    }
    finish(c, settings.tau_sim);
    return c;
}

OrderCheck certify_parameter_monotonicity(const ParameterVector& p, const AnalysisSettings& settings,
                                          const ModelDomain& domain)
{
    require_parameters(p, domain);
    OrderCheck c;
    c.name = "parameter_monotonicity_states";
    c.worst_violation = -std::numeric_limits<double>::infinity();
    Rng rng(settings.seed + 2000);
    const auto pb = parameter_bounds(p, settings.perturbation);
    const auto r = orders::r_p_f();
    const auto is = sim_settings(settings);
    for (std::size_t n = 0; n < settings.pairs; ++n) {
        ParameterVector qa, qb;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxRejections) throw ValidationError("parameter monotonicity: no admissible pair found");
            qa = draw_parameters(rng, pb, domain);
            qb = qa;
            for (std::size_t j = 0; j < kNumParams; ++j)
                if (r[j] != 0) qb[j] += r[j] * rng.uniform(0.0, settings.perturbation * std::abs(p[j]));
            if (check_domains(qb, domain).ok("D_p")) break;
        }
        const State x0{rng.uniform(0.01, 0.8) * domain.x_rg_max, rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        const auto u = draw_inputs(rng, settings.t_end, 0.0).first;
        const auto ta = integrate(qa, x0, u, is, domain);
        const auto tb = integrate(qb, x0, u, is, domain);
        c.grid_points = ta.size();
        for (std::size_t k = 0; k < ta.size(); ++k) {
            const auto a = ta.x[k].to_array(), b = tb.x[k].to_array();
            for (std::size_t i = 0; i < 3; ++i) {
                const double v = a[i] - b[i];
                if (v > c.worst_violation) {
                    c.worst_violation = v;
                    c.witness = describe(n, ta.time(k), i, v);
                }
            }
        }
        ++c.pairs;
    }
    finish(c, settings.tau_sim);
    return c;
}

std::pair<OrderCheck, OrderCheck> certify_output_monotonicity(const ParameterVector& p,
                                                              const AnalysisSettings& settings,
                                                              const ModelDomain& domain)
{
    require_parameters(p, domain);
    OrderCheck dyn, stat;
    dyn.name = "parameter_monotonicity_outputs";
    stat.name = "parameter_monotonicity_static";
    dyn.worst_violation = stat.worst_violation = -std::numeric_limits<double>::infinity();
    Rng rng(settings.seed + 3000);
    const auto pb = parameter_bounds(p, settings.perturbation);
    const auto r = orders::r_p();
    const auto r_y = orders::r_y();
    const auto r_phi = orders::r_phi();
    const auto is = sim_settings(settings);

    std::vector<double> grid;
    for (std::size_t k = 0; k < settings.static_grid_points; ++k)
        grid.push_back(settings.static_grid_points == 1
                           ? settings.y_lambda_min
                           : settings.y_lambda_min + (settings.y_lambda_max - settings.y_lambda_min)
                                                         * static_cast<double>(k)
                                                         / static_cast<double>(settings.static_grid_points - 1));

    for (std::size_t n = 0; n < settings.pairs; ++n) {
        ParameterVector qa, qb;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxRejections) throw ValidationError("output monotonicity: no admissible pair found");
            qa = draw_parameters(rng, pb, domain);
            qb = qa;
            for (std::size_t j = 0; j < kNumParams; ++j)
                if (j != index(Param::c11) && j != index(Param::c12))
                    qb[j] += r[j] * rng.uniform(0.0, settings.perturbation * std::abs(p[j]));
            if (check_domains(qb, domain).ok("D_p")) break;
        }
        const double y0 = rng.uniform(settings.y_lambda_min, settings.y_lambda_max);
        const auto [ua, ub] = draw_inputs(rng, settings.t_end, 0.2);
        const auto ta = integrate(qa, equilibrium_init(qa, y0, domain), ua, is, domain);
        const auto tb = integrate(qb, equilibrium_init(qb, y0, domain), ub, is, domain);
        dyn.grid_points = ta.size();
        for (std::size_t k = 0; k < ta.size(); ++k) {
            const auto a = ta.y[k].to_array(), b = tb.y[k].to_array();
            for (std::size_t i = 0; i < 2; ++i) {
                const double v = r_y[i] * (a[i] - b[i]);
                if (v > dyn.worst_violation) {
                    dyn.worst_violation = v;
                    dyn.witness = describe(n, ta.time(k), i, v);
                }
            }
        }
        ++dyn.pairs;

        for (double y : grid) {
            const auto a = static_phi(qa, y, domain).to_array();
            const auto b = static_phi(qb, y, domain).to_array();
            if (a[0] < 0.0 || b[0] < 0.0) continue; // equilibrium inflow outside D_u
            ++stat.grid_points;
            for (std::size_t i = 0; i < 3; ++i) {
                const double v = r_phi[i] * (a[i] - b[i]);
                if (v > stat.worst_violation) {
                    stat.worst_violation = v;
                    std::ostringstream os;
                    os.precision(6);
                    os << "pair " << n << ", y_lambda_eq = " << y << ", component " << i << ", violation " << v;
                    stat.witness = os.str();
                }
            }
        }
        ++stat.pairs;
    }
    finish(dyn, settings.tau_sim);
    finish(stat, 0.0);
    return {dyn, stat};
}

SShapeWitness s_shape_witness(const ParameterVector& p, const AnalysisSettings& settings, const ModelDomain& domain)
{
    require_parameters(p, domain);
    SShapeWitness w;
    const std::size_t n = std::max<std::size_t>(settings.s_shape_points, 3);
    // from just above the lowest reachable y_lambda up to twice the steady-state grid maximum
    const double lo = min_y_lambda(p, domain) + 1e-6;
    const double hi = std::max(lo + 1.0, 2.0 * settings.y_lambda_max);
    double prev_u = 0.0, prev_du = 0.0, prev_y = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double y = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        const double u = static_phi(p, y, domain).u_eq;
        if (k > 0) {
            const double du = u - prev_u;
            if (du != 0.0) {
                if (prev_du != 0.0 && (du > 0.0) != (prev_du > 0.0)) {
                    ++w.sign_changes;
                    w.turning_points.push_back(prev_y);
                }
                prev_du = du;
            }
        }
        prev_u = u;
        prev_y = y;
    }
    w.verdict = w.sign_changes > 0 ? Verdict::pass : Verdict::fail;
    return w;
}

Verdict VerificationReport::overall() const noexcept
{
    bool inconclusive = false;
    if (!domain_violations.empty() || s_shape.verdict == Verdict::fail) return Verdict::fail;
    for (const auto& c : patterns) {
        if (c.verdict == Verdict::fail) return Verdict::fail;
        inconclusive = inconclusive || c.verdict == Verdict::inconclusive;
    }
    for (const auto& c : orders)
        if (c.verdict == Verdict::fail) return Verdict::fail;
    return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

VerificationReport verify(const ParameterVector& p, const AnalysisSettings& settings, const ModelDomain& domain)
{
    VerificationReport rep;
    for (const auto& c : check_domains(p, domain).violations()) rep.domain_violations.push_back(c.set + ": " + c.constraint);
    if (!rep.domain_violations.empty()) return rep;

    rep.patterns = certify_all_patterns(p, settings, domain);
    rep.orders.push_back(certify_cooperativity(p, settings, domain));
    rep.orders.push_back(certify_parameter_monotonicity(p, settings, domain));
    auto [dyn, stat] = certify_output_monotonicity(p, settings, domain);
    rep.orders.push_back(std::move(dyn));
    rep.orders.push_back(std::move(stat));
    rep.s_shape = s_shape_witness(p, settings, domain);
    return rep;
}

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string point_string(const std::vector<double>& z)
{
    std::string s = "(";
    for (std::size_t i = 0; i < z.size(); ++i) s += (i ? ", " : "") + num(z[i]);
    return s + ")";
}

} // namespace

void write_verification_report(std::ostream& os, const VerificationReport& report)
{
    if (!report.domain_violations.empty()) {
        os << "parameter vector outside the admissible set:\n";
        for (const auto& v : report.domain_violations) os << "  FAIL " << v << '\n';
        os << "overall: " << verdict_name(report.overall()) << '\n';
        return;
    }
    os << "sign patterns\n";
    for (const auto& c : report.patterns) {
        os << "  [" << verdict_name(c.verdict) << "] " << c.name << "  expected " << c.expected.to_string()
           << "  observed " << c.observed.to_string() << "  samples " << c.samples << " rejected " << c.rejected
           << '\n';
        for (const auto& m : c.mismatches)
            os << "    mismatch at sample " << m.sample << " entry (" << m.row << ',' << m.col << ") = " << num(m.value)
               << " point " << point_string(m.point) << '\n';
        if (c.mismatch_count > c.mismatches.size())
            os << "    ... " << c.mismatch_count - c.mismatches.size() << " more mismatches\n";
        for (const auto& w : c.undefined_witnesses) {
            os << "    entry (" << w.row << ',' << w.col << ") positive at "
               << (w.plus_point ? point_string(*w.plus_point) : "none") << '\n';
            os << "    entry (" << w.row << ',' << w.col << ") negative at "
               << (w.minus_point ? point_string(*w.minus_point) : "none") << '\n';
        }
    }
    os << "order preservation\n";
    for (const auto& c : report.orders) {
        os << "  [" << verdict_name(c.verdict) << "] " << c.name << "  pairs " << c.pairs << " grid " << c.grid_points
           << "  worst " << num(c.worst_violation) << '\n';
        if (!c.witness.empty()) os << "    worst at " << c.witness << '\n';
    }
    os << "static characteristic shape\n";
    os << "  [" << verdict_name(report.s_shape.verdict) << "] u_eq sign changes " << report.s_shape.sign_changes;
    for (double y : report.s_shape.turning_points) os << "  turning near y_lambda_eq = " << num(y);
    os << '\n';
    os << "overall: " << verdict_name(report.overall()) << '\n';
}

std::string verification_summary_json(const VerificationReport& report)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["overall"] = verdict_name(report.overall());
    j["domain_violations"] = report.domain_violations;
    ordered_json pats = ordered_json::array();
    for (const auto& c : report.patterns) {
        ordered_json e;
        e["name"] = c.name;
        e["verdict"] = verdict_name(c.verdict);
        e["expected"] = c.expected.to_string();
        e["observed"] = c.observed.to_string();
        e["samples"] = c.samples;
        e["rejected"] = c.rejected;
        e["mismatch_count"] = c.mismatch_count;
        ordered_json mm = ordered_json::array();
        for (const auto& m : c.mismatches)
            mm.push_back({{"sample", m.sample}, {"row", m.row}, {"col", m.col}, {"value", m.value}, {"point", m.point}});
        e["mismatches"] = mm;
        ordered_json ww = ordered_json::array();
        for (const auto& w : c.undefined_witnesses) {
            ordered_json x{{"row", w.row}, {"col", w.col}};
            x["positive_at"] = w.plus_point ? ordered_json(*w.plus_point) : ordered_json(nullptr);
            x["negative_at"] = w.minus_point ? ordered_json(*w.minus_point) : ordered_json(nullptr);
            ww.push_back(x);
        }
        e["undefined_witnesses"] = ww;
        pats.push_back(e);
    }
    j["patterns"] = pats;
    ordered_json ords = ordered_json::array();
    for (const auto& c : report.orders)
        ords.push_back({{"name", c.name},
                        {"verdict", verdict_name(c.verdict)},
                        {"pairs", c.pairs},
                        {"grid_points", c.grid_points},
                        {"worst_violation", c.worst_violation},
                        {"witness", c.witness}});
    j["orders"] = ords;
    j["s_shape"] = {{"verdict", verdict_name(report.s_shape.verdict)},
                    {"sign_changes", report.s_shape.sign_changes},
                    {"turning_points", report.s_shape.turning_points}};
    return j.dump(2) + "\n";
}

} // namespace sputter
