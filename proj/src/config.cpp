#include "sputter/config.hpp"

#include "sputter/errors.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace sputter {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, const std::set<std::string>& keys)
{
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!keys.contains(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned()) throw ConfigError(where + ": expected a nonnegative integer");
    return j.get<std::size_t>();
}

template <class T>
void read(const json& obj, const char* key, T& target, const std::string& where)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    const std::string w = where + "." + key;
    if constexpr (std::is_same_v<T, double>)
        target = number(v, w);
    else if constexpr (std::is_same_v<T, int>)
        target = static_cast<int>(count(v, w));
    else if constexpr (std::is_same_v<T, std::uint64_t>)
        target = static_cast<std::uint64_t>(count(v, w));
    else
        target = count(v, w);
}

void read_integrator(const json& j, IntegratorSettings& s, const std::string& w)
{
    only_keys(j, w, {"dt", "t_end", "sample_interval", "clamp_tol"});
    read(j, "dt", s.dt, w);
    read(j, "t_end", s.t_end, w);
    read(j, "sample_interval", s.sample_interval, w);
    read(j, "clamp_tol", s.clamp_tol, w);
}

} // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    only_keys(j, "config",
              {"parameters", "domain", "integrator", "estimation", "analysis", "synth", "static_curve", "output_dir"});

    RunConfig c;
    if (j.contains("parameters")) {
        if (!j["parameters"].is_string()) throw ConfigError("config.parameters: expected a path string");
        c.parameters = base_dir / j["parameters"].get<std::string>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("config.output_dir: expected a path string");
        c.output_dir = base_dir / j["output_dir"].get<std::string>();
    }
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        only_keys(d, "domain", {"x_rg_max", "u_max"});
        if (d.contains("x_rg_max")) c.x_rg_max = number(d["x_rg_max"], "domain.x_rg_max");
        if (d.contains("u_max") && !d["u_max"].is_null()) c.u_max = number(d["u_max"], "domain.u_max");
    }
    if (j.contains("integrator")) read_integrator(j["integrator"], c.integrator, "integrator");
    if (j.contains("estimation")) {
        const auto& e = j["estimation"];
        const std::string w = "estimation";
        only_keys(e, w, {"delta0", "growth", "delta_max", "eps_c", "max_cycles", "tau_enc", "tau_static", "weights"});
        auto& s = c.estimation;
        read(e, "delta0", s.delta0, w);
        read(e, "growth", s.growth, w);
        read(e, "delta_max", s.delta_max, w);
        read(e, "eps_c", s.eps_c, w);
        read(e, "max_cycles", s.max_cycles, w);
        read(e, "tau_enc", s.tau_enc, w);
        read(e, "tau_static", s.tau_static, w);
        if (e.contains("weights")) {
            const auto& p = e["weights"];
            if (p == "dataset")
                c.weights = WeightPolicy::dataset;
            else if (p == "uniform")
                c.weights = WeightPolicy::uniform;
            else
                throw ConfigError("estimation.weights: expected \"dataset\" or \"uniform\"");
        }
    }
    if (j.contains("analysis")) {
        const auto& a = j["analysis"];
        const std::string w = "analysis";
        only_keys(a, w,
                  {"samples", "perturbation", "zero_tol", "h", "seed", "pairs", "t_end", "dt", "tau_sim",
                   "static_grid_points", "y_lambda_min", "y_lambda_max", "s_shape_points"});
        auto& s = c.analysis;
        read(a, "samples", s.samples, w);
        read(a, "perturbation", s.perturbation, w);
        read(a, "zero_tol", s.zero_tol, w);
        read(a, "h", s.h, w);
        read(a, "seed", s.seed, w);
        read(a, "pairs", s.pairs, w);
        read(a, "t_end", s.t_end, w);
        read(a, "dt", s.dt, w);
        read(a, "tau_sim", s.tau_sim, w);
        read(a, "static_grid_points", s.static_grid_points, w);
        read(a, "y_lambda_min", s.y_lambda_min, w);
        read(a, "y_lambda_max", s.y_lambda_max, w);
        read(a, "s_shape_points", s.s_shape_points, w);
    }
    if (j.contains("synth")) {
        const auto& y = j["synth"];
        const std::string w = "synth";
        only_keys(y, w,
                  {"y_lambda_min", "y_lambda_max", "points", "y_lambda_start", "sampling_time", "samples", "steps",
                   "noise", "seed"});
        auto& s = c.synth;
        read(y, "y_lambda_min", s.y_lambda_min, w);
        read(y, "y_lambda_max", s.y_lambda_max, w);
        read(y, "points", s.points, w);
        read(y, "y_lambda_start", s.y_lambda_start, w);
        read(y, "sampling_time", s.sampling_time, w);
        read(y, "samples", s.samples, w);
        read(y, "noise", s.noise, w);
        read(y, "seed", s.seed, w);
        if (y.contains("steps")) {
            const auto& st = y["steps"];
            if (!st.is_array()) throw ConfigError("synth.steps: expected an array of [t, du] pairs");
            s.steps.clear();
            for (const auto& e : st) {
                if (!e.is_array() || e.size() != 2) throw ConfigError("synth.steps: expected [t, du] pairs");
                s.steps.push_back({number(e[0], "synth.steps"), number(e[1], "synth.steps")});
            }
        }
    }
    if (j.contains("static_curve")) {
        const auto& sc = j["static_curve"];
        const std::string w = "static_curve";
        only_keys(sc, w, {"y_lambda_min", "y_lambda_max", "points"});
        read(sc, "y_lambda_min", c.static_curve.y_lambda_min, w);
        read(sc, "y_lambda_max", c.static_curve.y_lambda_max, w);
        read(sc, "points", c.static_curve.points, w);
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_run_config(text, path.parent_path());
}

void RunConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(integrator.dt, "integrator.dt");
    positive(integrator.t_end, "integrator.t_end");
    positive(integrator.clamp_tol, "integrator.clamp_tol");
    positive(estimation.delta0, "estimation.delta0");
    positive(estimation.eps_c, "estimation.eps_c");
    positive(estimation.tau_enc, "estimation.tau_enc");
    if (!(estimation.tau_static >= 0.0)) throw ConfigError("estimation.tau_static must be nonnegative");
    if (!(estimation.growth > 1.0)) throw ConfigError("estimation.growth must exceed 1");
    if (!(estimation.delta_max > 0.0 && estimation.delta_max < 1.0))
        throw ConfigError("estimation.delta_max must lie in (0, 1)");
    if (estimation.max_cycles < 1) throw ConfigError("estimation.max_cycles must be at least 1");
    positive(analysis.zero_tol, "analysis.zero_tol");
    positive(analysis.h, "analysis.h");
    positive(analysis.tau_sim, "analysis.tau_sim");
    positive(analysis.dt, "analysis.dt");
    positive(analysis.t_end, "analysis.t_end");
    if (!(analysis.perturbation > 0.0 && analysis.perturbation < 1.0))
        throw ConfigError("analysis.perturbation must lie in (0, 1)");
    if (analysis.samples == 0) throw ConfigError("analysis.samples must be at least 1");
    positive(synth.sampling_time, "synth.sampling_time");
    if (!(synth.noise >= 0.0)) throw ConfigError("synth.noise must be nonnegative");
    if (static_curve.points == 0) throw ConfigError("static_curve.points must be at least 1");
    if (x_rg_max && !(*x_rg_max > 0.0)) throw ConfigError("domain.x_rg_max must be positive");
}

ParameterFile RunConfig::load_parameters() const
{
    ParameterFile pf = parameters ? read_parameter_file(*parameters) : ParameterFile{nominal_parameters(), ModelDomain{}};
    if (x_rg_max) pf.domain.x_rg_max = *x_rg_max;
    if (u_max) pf.domain.u_max = *u_max;
    return pf;
}

} // namespace sputter
