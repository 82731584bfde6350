#include "sputter/cli.hpp"

#include "sputter/analysis.hpp"
#include "sputter/config.hpp"
#include "sputter/csv.hpp"
#include "sputter/data.hpp"
#include "sputter/errors.hpp"
#include "sputter/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace sputter {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string params;

    // simulate
    std::string input;
    std::optional<double> y_lambda0;
    std::optional<double> t_end;
    std::optional<double> dt;
    std::optional<double> sample_interval;

    // static-curve
    std::optional<double> y_min;
    std::optional<double> y_max;
    std::optional<std::size_t> points;

    // synth
    std::optional<double> noise;

    // estimate
    std::string steady;
    std::vector<std::string> trajectories;
};

// defaults < config file < flags
RunConfig resolve(const Options& o)
{
    RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (!o.out.empty()) c.output_dir = o.out;
    if (!o.params.empty()) c.parameters = o.params;
    if (o.seed) {
        c.synth.seed = *o.seed;
        c.analysis.seed = *o.seed;
    }
    if (o.t_end) c.integrator.t_end = *o.t_end;
    if (o.dt) c.integrator.dt = *o.dt;
    if (o.sample_interval) c.integrator.sample_interval = *o.sample_interval;
    if (o.y_min) c.static_curve.y_lambda_min = *o.y_min;
    if (o.y_max) c.static_curve.y_lambda_max = *o.y_max;
    if (o.points) c.static_curve.points = *o.points;
    if (o.noise) c.synth.noise = *o.noise;
    c.validate();
    return c;
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path.string() + "'");
    return f;
}

fs::path prepare_dir(const RunConfig& c)
{
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + c.output_dir.string() + "': " + ec.message());
    return c.output_dir;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g;
    for (std::size_t k = 0; k < n; ++k)
        g.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    return g;
}

int cmd_simulate(const Options& o, std::ostream& out)
{
    const auto c = resolve(o);
    const auto pf = c.load_parameters();
    const auto u = read_input_schedule(o.input);
    const double y0 = o.y_lambda0.value_or(c.synth.y_lambda_start);
    const State x0 = equilibrium_init(pf.p, y0, pf.domain);
    const auto traj = integrate(pf.p, x0, u, c.integrator, pf.domain);
    const auto dir = prepare_dir(c);
    write_trajectory_csv(dir / "trajectory.csv", traj);
    if (traj.x_rg_max_exceeded)
        out << "warning: x_rg exceeded x_rg_max (peak " << format_double(traj.x_rg_peak) << ")\n";
    out << "wrote " << (dir / "trajectory.csv").string() << " (" << traj.size() << " samples)\n";
    return 0;
}

int cmd_static_curve(const Options& o, std::ostream& out)
{
    const auto c = resolve(o);
    const auto pf = c.load_parameters();
    const auto grid = linear_grid(c.static_curve.y_lambda_min, c.static_curve.y_lambda_max, c.static_curve.points);
    std::ostringstream body;
    body << "y_lambda_eq,u_eq,x_ta_eq,x_su_eq,y_sb_eq\n";
    for (double y : grid) {
        const auto phi = static_phi(pf.p, y, pf.domain);
        const double x_ta = (pf.p[Param::c20] - phi.y_sb_eq) / pf.p[Param::c21];
        write_row(body, {y, phi.u_eq, x_ta, phi.x_su_eq, phi.y_sb_eq});
    }
    const auto dir = prepare_dir(c);
    open_out(dir / "static_curve.csv") << body.str();
    out << "wrote " << (dir / "static_curve.csv").string() << " (" << grid.size() << " points)\n";
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const auto c = resolve(o);
    const auto pf = c.load_parameters();
    const auto report = verify(pf.p, c.analysis, pf.domain);
    const auto dir = prepare_dir(c);
    {
        auto f = open_out(dir / "verify_report.txt");
        write_verification_report(f, report);
    }
    open_out(dir / "verify_summary.json") << verification_summary_json(report);
    write_verification_report(out, report);
    if (!report.domain_violations.empty()) return 2;
    return report.overall() == Verdict::fail ? 1 : 0;
}

int cmd_synth(const Options& o, std::ostream& out)
{
    const auto c = resolve(o);
    const auto pf = c.load_parameters();
    const auto data = synth_dataset(pf.p, c.synth, c.integrator, pf.domain);
    const auto dir = prepare_dir(c);
    write_steady_state(dir / "steady_state.csv", data.steady);
    write_trajectory(dir / "trajectory.csv", data.trajectories.front());
    write_parameter_file(dir / "p_true.json", pf.p, pf.domain);
    out << "wrote " << (dir / "steady_state.csv").string() << ", " << (dir / "trajectory.csv").string() << ", "
        << (dir / "p_true.json").string() << '\n';
    return 0;
}

nlohmann::ordered_json margin_json(double m)
{
    return std::isinf(m) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m);
}

nlohmann::ordered_json certificate_json(const EnclosureCertificate& c, double cost)
{
    return {{"feasible", c.feasible},
            {"cost", cost},
            {"static_margin", {{"u_eq", margin_json(c.static_margin[0])},
                               {"x_su_eq", margin_json(c.static_margin[1])},
                               {"y_sb_eq", margin_json(c.static_margin[2])}}},
            {"trajectory_margin",
             {{"y_lambda", margin_json(c.trajectory_margin[0])}, {"y_sb", margin_json(c.trajectory_margin[1])}}},
            {"first_violation", c.first_violation}};
}

int cmd_estimate(const Options& o, std::ostream& out)
{
    const auto c = resolve(o);
    const auto pf = c.load_parameters();
    if (o.steady.empty() && o.trajectories.empty())
        throw ValidationError("estimate: give at least one of --steady and --trajectory");

    MeasurementDataset data;
    if (!o.steady.empty()) data.steady = load_steady_state(o.steady);
    for (const auto& t : o.trajectories) data.trajectories.push_back(load_trajectory(t));

    EstimationSettings es = c.estimation;
    es.integrator = c.integrator;
    es.domain = pf.domain;
    CostWeights w = CostWeights::from_dataset(data);
    if (c.weights == WeightPolicy::uniform) {
        for (auto& r : w.steady) r = {data.steady.has_u_eq ? 1.0 : 0.0, 1.0, 1.0};
        for (auto& t : w.trajectory)
            for (auto& r : t) r = {1.0, 1.0};
    }
    for (const auto& warn : data.steady.warnings) out << "warning: " << warn << '\n';

    const auto est = estimate_interval(pf.p, data, w, es);
    const auto dir = prepare_dir(c);
    write_parameter_file(dir / "p_hat_a.json", est.p_hat_a, pf.domain);
    write_parameter_file(dir / "p_hat_b.json", est.p_hat_b, pf.domain);
    {
        auto f = open_out(dir / "certificate.txt");
        write_certificate_report(f, est);
    }
    nlohmann::ordered_json j;
    j["feasible"] = est.feasible();
    j["delta"] = est.delta;
    j["width"] = est.width;
    j["ordered"] = est.ordered;
    j["evaluations"] = est.evaluations;
    j["side_a"] = certificate_json(est.certificate_a, est.cost_a);
    j["side_b"] = certificate_json(est.certificate_b, est.cost_b);
    j["warnings"] = est.warnings;
    open_out(dir / "certificate.json") << j.dump(2) << '\n';

    if (!data.steady.empty()) {
        double lo = data.steady.rows.front().y_lambda_eq, hi = lo;
        for (const auto& r : data.steady.rows) {
            lo = std::min(lo, r.y_lambda_eq);
            hi = std::max(hi, r.y_lambda_eq);
        }
        auto f = open_out(dir / "static_envelope.csv");
        write_static_envelope(f, est, linear_grid(lo, hi, std::max<std::size_t>(100, data.steady.rows.size())),
                              pf.domain);
    }
    for (std::size_t k = 0; k < data.trajectories.size(); ++k) {
        auto f = open_out(dir / ("trajectory_envelope_" + std::to_string(k) + ".csv"));
        write_trajectory_envelope(f, est, data.trajectories[k], es.integrator, pf.domain);
    }
    out << "delta = " << format_double(est.delta) << '\n';
    out << "width = " << format_double(est.width) << '\n';
    out << "certificate a: " << (est.certificate_a.feasible ? "PASS" : "FAIL") << '\n';
    out << "certificate b: " << (est.certificate_b.feasible ? "PASS" : "FAIL") << '\n';
    out << "wrote results to " << dir.string() << '\n';
    if (!est.feasible()) throw InfeasibleError("final re-check of the estimated pair failed");
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"reactive sputtering model: simulation, monotonicity checks and interval estimation", "sputter"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "JSON run configuration");
    app.add_option("--out", o.out, "output directory (overrides the config)");
    app.add_option("--seed", o.seed, "seed for synth and verify sampling");

    auto* sim = app.add_subcommand("simulate", "integrate the model for an input schedule");
    sim->add_option("--params", o.params, "parameter file");
    sim->add_option("--input", o.input, "input schedule CSV with columns t,u")->required();
    sim->add_option("--y-lambda0", o.y_lambda0, "initial y_lambda; the start is the matching equilibrium");
    sim->add_option("--t-end", o.t_end);
    sim->add_option("--dt", o.dt);
    sim->add_option("--sample-interval", o.sample_interval);

    auto* sc = app.add_subcommand("static-curve", "static characteristic on a y_lambda grid");
    sc->add_option("--params", o.params, "parameter file");
    sc->add_option("--y-min", o.y_min);
    sc->add_option("--y-max", o.y_max);
    sc->add_option("--points", o.points);

    auto* ver = app.add_subcommand("verify", "sign-pattern and order-preservation certification");
    ver->add_option("--params", o.params, "parameter file");

    auto* syn = app.add_subcommand("synth", "synthetic steady-state and step-response data");
    syn->add_option("--params", o.params, "true parameter file");
    syn->add_option("--noise", o.noise, "relative noise amplitude");

    auto* est = app.add_subcommand("estimate", "guaranteed parameter-interval estimation");
    est->add_option("--params", o.params, "nominal parameter file");
    est->add_option("--steady", o.steady, "steady-state CSV");
    est->add_option("--trajectory", o.trajectories, "trajectory CSV (repeatable)");

    for (auto* s : {sim, sc, ver, syn, est}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o, out);
        if (sc->parsed()) return cmd_static_curve(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        if (syn->parsed()) return cmd_synth(o, out);
        if (est->parsed()) return cmd_estimate(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace sputter
