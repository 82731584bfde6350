#pragma once

#include "sputter/analysis.hpp"
#include "sputter/data.hpp"
#include "sputter/estimate.hpp"
#include "sputter/parameters.hpp"
#include "sputter/sim.hpp"

#include <filesystem>
#include <optional>
#include <string_view>

namespace sputter {

enum class WeightPolicy { dataset, uniform };

struct StaticCurveSettings {
    double y_lambda_min = 0.6;
    double y_lambda_max = 6.0;
    std::size_t points = 200;
};

struct RunConfig {
    // Relative paths are resolved against the directory of the config file.
    std::optional<std::filesystem::path> parameters; // nominal p; built-in set when absent
    std::optional<double> x_rg_max;                  // overrides the parameter file
    std::optional<double> u_max;
    IntegratorSettings integrator{};
    EstimationSettings estimation{};
    WeightPolicy weights = WeightPolicy::dataset;
    AnalysisSettings analysis{};
    SynthSettings synth{};
    StaticCurveSettings static_curve{};
    std::filesystem::path output_dir = "out";

    // Nominal parameters and model domain after applying the overrides.
    ParameterFile load_parameters() const;
    void validate() const;
};

// JSON object; every key optional, unknown keys rejected.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace sputter
