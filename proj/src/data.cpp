#include "sputter/data.hpp"

#include "sputter/csv.hpp"
#include "sputter/errors.hpp"
#include "sputter/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

namespace sputter {

namespace {

std::string where(const std::string& source, const CsvTable& t, std::size_t row)
{
    return source + ":" + std::to_string(t.line_numbers[row]);
}

void require_finite(const CsvTable& t, const std::string& source)
{
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < t.header.size(); ++c)
            if (!std::isfinite(t.rows[r][c]))
                throw DatasetError(where(source, t, r) + ": non-finite value in column '" + t.header[c] + "' (row "
                                   + std::to_string(r) + ")");
}

void require_known_columns(const CsvTable& t, const std::set<std::string>& known, const std::string& source)
{
    for (const auto& h : t.header)
        if (!known.contains(h)) throw DatasetError(source + ": unknown column '" + h + "'");
    const std::set<std::string> unique(t.header.begin(), t.header.end());
    if (unique.size() != t.header.size()) throw DatasetError(source + ": duplicate column in header");
}

double weight_of(const std::vector<double>& row, const std::optional<std::size_t>& col)
{
    return col ? row[*col] : 1.0;
}

double range_of(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

} // namespace

SteadyStateDataset parse_steady_state(std::string_view text, const std::string& source)
{
    const auto t = parse_csv(text, source);
    require_known_columns(t, {"y_lambda_eq", "u_eq", "x_su_eq", "y_sb_eq", "w_u", "w_xsu", "w_ysb"}, source);
    for (const char* required : {"y_lambda_eq", "x_su_eq", "y_sb_eq"})
        if (!t.column_index(required)) throw DatasetError(source + ": missing column '" + std::string(required) + "'");
    require_finite(t, source);

    SteadyStateDataset ds;
    const auto iy = *t.column_index("y_lambda_eq");
    const auto iu = t.column_index("u_eq");
    const auto ix = *t.column_index("x_su_eq");
    const auto is = *t.column_index("y_sb_eq");
    const auto wu = t.column_index("w_u");
    const auto wx = t.column_index("w_xsu");
    const auto ws = t.column_index("w_ysb");
    ds.has_u_eq = iu.has_value();
    if (!ds.has_u_eq) {
        ds.warnings.push_back(source
                              + ": no u_eq column; the inflow channel is dropped from cost and enclosure (degraded mode)");
        if (wu) throw DatasetError(source + ": column 'w_u' given without 'u_eq'");
    }

    std::set<double> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        SteadyStateRow s;
        s.y_lambda_eq = row[iy];
        s.u_eq = iu ? row[*iu] : 0.0;
        s.x_su_eq = row[ix];
        s.y_sb_eq = row[is];
        s.weights = {ds.has_u_eq ? weight_of(row, wu) : 0.0, weight_of(row, wx), weight_of(row, ws)};
        for (double w : s.weights)
            if (w < 0.0) throw DatasetError(where(source, t, r) + ": negative weight");
        if (!seen.insert(s.y_lambda_eq).second)
            throw DatasetError(where(source, t, r) + ": duplicate y_lambda_eq value");
        ds.rows.push_back(s);
    }
    return ds;
}

TrajectoryDataset parse_trajectory(std::string_view text, const std::string& source)
{
    const auto t = parse_csv(text, source);
    require_known_columns(t, {"t", "u", "y_lambda", "y_sb", "w_ylambda", "w_ysb"}, source);
    for (const char* required : {"t", "u", "y_lambda", "y_sb"})
        if (!t.column_index(required)) throw DatasetError(source + ": missing column '" + std::string(required) + "'");
    require_finite(t, source);
    if (t.rows.size() < 2) throw DatasetError(source + ": a trajectory needs at least two samples");

    const auto it = *t.column_index("t");
    const auto iu = *t.column_index("u");
    const auto iy = *t.column_index("y_lambda");
    const auto is = *t.column_index("y_sb");
    const auto wy = t.column_index("w_ylambda");
    const auto ws = t.column_index("w_ysb");

    TrajectoryDataset ds;
    if (t.rows[0][it] != 0.0) throw DatasetError(where(source, t, 0) + ": trajectory must start at t = 0");
    ds.sampling_time = t.rows[1][it] - t.rows[0][it];
    if (!(ds.sampling_time > 0.0)) throw DatasetError(where(source, t, 1) + ": non-uniform time grid");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const double expected = static_cast<double>(r) * ds.sampling_time;
        if (std::abs(row[it] - expected) > 1e-9 * std::max(1.0, expected))
            throw DatasetError(where(source, t, r) + ": non-uniform time grid (row " + std::to_string(r) + ")");
        if (row[iu] < 0.0) throw DatasetError(where(source, t, r) + ": negative input u");
        TrajectoryRow tr{row[it], row[iu], row[iy], row[is], {weight_of(row, wy), weight_of(row, ws)}};
        for (double w : tr.weights)
            if (w < 0.0) throw DatasetError(where(source, t, r) + ": negative weight");
        ds.rows.push_back(tr);
    }
    return ds;
}

namespace {

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

SteadyStateDataset load_steady_state(const std::filesystem::path& path)
{
    return parse_steady_state(slurp(path), path.string());
}

TrajectoryDataset load_trajectory(const std::filesystem::path& path)
{
    return parse_trajectory(slurp(path), path.string());
}

std::variant<SteadyStateDataset, TrajectoryDataset> load_dataset(const std::filesystem::path& path)
{
    const auto text = slurp(path);
    const auto header = parse_csv(text, path.string()).header;
    if (std::find(header.begin(), header.end(), "y_lambda_eq") != header.end())
        return parse_steady_state(text, path.string());
    return parse_trajectory(text, path.string());
}

InputSignal TrajectoryDataset::input() const
{
    std::vector<InputSignal::Breakpoint> bps;
    for (const auto& r : rows)
        if (bps.empty() || r.u != bps.back().u) bps.push_back({bps.empty() ? 0.0 : r.t, r.u});
    return InputSignal(std::move(bps));
}

void write_steady_state(std::ostream& os, const SteadyStateDataset& ds)
{
    if (ds.has_u_eq) {
        os << "y_lambda_eq,u_eq,x_su_eq,y_sb_eq,w_u,w_xsu,w_ysb\n";
        for (const auto& r : ds.rows)
            write_row(os, {r.y_lambda_eq, r.u_eq, r.x_su_eq, r.y_sb_eq, r.weights[0], r.weights[1], r.weights[2]});
    } else {
        os << "y_lambda_eq,x_su_eq,y_sb_eq,w_xsu,w_ysb\n";
        for (const auto& r : ds.rows) write_row(os, {r.y_lambda_eq, r.x_su_eq, r.y_sb_eq, r.weights[1], r.weights[2]});
    }
}

void write_trajectory(std::ostream& os, const TrajectoryDataset& ds)
{
    os << "t,u,y_lambda,y_sb,w_ylambda,w_ysb\n";
    for (const auto& r : ds.rows) write_row(os, {r.t, r.u, r.y_lambda, r.y_sb, r.weights[0], r.weights[1]});
}

void write_steady_state(const std::filesystem::path& path, const SteadyStateDataset& ds)
{
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    write_steady_state(out, ds);
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryDataset& ds)
{
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    write_trajectory(out, ds);
}

InputSignal synth_input(const ParameterVector& p_true, const SynthSettings& s, const ModelDomain& domain)
{
    const State x0 = equilibrium_init(p_true, s.y_lambda_start, domain);
    const double u0 = static_pi(p_true, x0.x_rg, domain).u_eq;
    if (u0 < 0.0) throw DomainError("u >= 0", "equilibrium inflow at y_lambda_start is negative");
    std::vector<InputSignal::Breakpoint> bps{{0.0, u0}};
    for (const auto& step : s.steps) {
        const double k = step.t / s.sampling_time;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
            throw ValidationError("synth: step time " + std::to_string(step.t) + " is not on the sampling grid");
        bps.push_back({std::round(k) * s.sampling_time, u0 + step.u});
    }
    return InputSignal(std::move(bps));
}

MeasurementDataset synth_dataset(const ParameterVector& p_true, const SynthSettings& s,
                                 const IntegratorSettings& integrator, const ModelDomain& domain)
{
    require_parameters(p_true, domain);
    if (s.points == 0) throw ValidationError("synth: at least one steady-state point required");
    if (s.samples < 2) throw ValidationError("synth: at least two trajectory samples required");
    if (!(s.noise >= 0.0)) throw ValidationError("synth: noise amplitude must be nonnegative");

    MeasurementDataset out;

    // clean steady state
    for (std::size_t k = 0; k < s.points; ++k) {
        const double y = s.points == 1 ? s.y_lambda_min
                                       : s.y_lambda_min
                                             + (s.y_lambda_max - s.y_lambda_min) * static_cast<double>(k)
                                                   / static_cast<double>(s.points - 1);
        const auto phi = static_phi(p_true, y, domain);
        out.steady.rows.push_back({y, phi.u_eq, phi.x_su_eq, phi.y_sb_eq, {1.0, 1.0, 1.0}});
    }

    // clean trajectory
    const InputSignal input = synth_input(p_true, s, domain);
    IntegratorSettings is = integrator;
    is.sample_interval = s.sampling_time;
    is.t_end = static_cast<double>(s.samples - 1) * s.sampling_time;
    const State x0 = equilibrium_init(p_true, s.y_lambda_start, domain);
    const auto traj = integrate(p_true, x0, input, is, domain);

    TrajectoryDataset td;
    td.sampling_time = s.sampling_time;
    for (std::size_t k = 0; k < traj.size(); ++k)
        td.rows.push_back({static_cast<double>(k) * s.sampling_time, traj.u[k], traj.y[k].y_lambda, traj.y[k].y_sb,
                           {1.0, 1.0}});

    if (s.noise > 0.0) {
        Rng rng(s.seed);
        std::vector<double> cu, cx, cs, cy, cb;
        for (const auto& r : out.steady.rows) {
            cu.push_back(r.u_eq);
            cx.push_back(r.x_su_eq);
            cs.push_back(r.y_sb_eq);
        }
        for (const auto& r : td.rows) {
            cy.push_back(r.y_lambda);
            cb.push_back(r.y_sb);
        }
        const double ru = s.noise * range_of(cu), rx = s.noise * range_of(cx), rs = s.noise * range_of(cs);
        const double ry = s.noise * range_of(cy), rb = s.noise * range_of(cb);
        for (auto& r : out.steady.rows) {
            r.u_eq += ru * rng.uniform(-1.0, 1.0);
            r.x_su_eq += rx * rng.uniform(-1.0, 1.0);
            r.y_sb_eq += rs * rng.uniform(-1.0, 1.0);
        }
        for (auto& r : td.rows) {
            r.y_lambda += ry * rng.uniform(-1.0, 1.0);
            r.y_sb += rb * rng.uniform(-1.0, 1.0);
        }
    }
    out.trajectories.push_back(std::move(td));
    return out;
}

} // namespace sputter
