#include "sputter/parameters.hpp"

#include "sputter/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sputter {

std::optional<Param> param_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (kParamNames[i] == name) return static_cast<Param>(i);
    return std::nullopt;
}

ParameterVector nominal_parameters()
{
    return ParameterVector({
        0.9,  // a11   pumping
        1.3,  // a112  target gettering
        60.0, // a113  substrate gettering
        0.7,  // a12
        0.3,  // a123
        8.0,  // a212
        1.0,  // a22
        40.0, // a313
        0.2,  // a323
        0.1,  // a33c
        1.2,  // a33m
        1.0,  // b
        0.8,  // c11
        0.5,  // c12
        5.0,  // c20
        2.0,  // c21
    });
}

ParameterFile parse_parameter_text(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("parameter file: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("parameter file: expected a flat object");

    ParameterFile out;
    std::array<bool, kNumParams> seen{};
    bool seen_xmax = false;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number())
            throw ValidationError("parameter file: value of '" + key + "' is not a number");
        const double v = value.get<double>();
        if (key == "x_rg_max") {
            out.domain.x_rg_max = v;
            seen_xmax = true;
            continue;
        }
        const auto param = param_from_name(key);
        if (!param) throw ValidationError("parameter file: unknown key '" + key + "'");
        out.p[*param] = v;
        seen[index(*param)] = true;
    }
    for (std::size_t i = 0; i < kNumParams; ++i)
        if (!seen[i]) throw ValidationError("parameter file: missing key '" + std::string(kParamNames[i]) + "'");
    if (!seen_xmax) throw ValidationError("parameter file: missing key 'x_rg_max'");
    if (!(out.domain.x_rg_max > 0.0)) throw ValidationError("parameter file: x_rg_max must be positive");
    return out;
}

ParameterFile read_parameter_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open parameter file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_parameter_text(ss.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string format_parameter_text(const ParameterVector& p, const ModelDomain& domain)
{
    // ordered_json keeps the parameter order on disk
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < kNumParams; ++i) j[std::string(kParamNames[i])] = p[i];
    j["x_rg_max"] = domain.x_rg_max;
    return j.dump(2) + "\n";
}

void write_parameter_file(const std::filesystem::path& path, const ParameterVector& p, const ModelDomain& domain)
{
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write parameter file '" + path.string() + "'");
    out << format_parameter_text(p, domain);
}

} // namespace sputter
