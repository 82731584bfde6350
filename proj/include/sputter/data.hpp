#pragma once

#include "sputter/model.hpp"
#include "sputter/sim.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace sputter {

struct SteadyStateRow {
    double y_lambda_eq = 0.0;
    double u_eq = 0.0; // unused when the dataset has no u_eq column
    double x_su_eq = 0.0;
    double y_sb_eq = 0.0;
    std::array<double, 3> weights{1.0, 1.0, 1.0}; // (u, x_su, y_sb)

    std::array<double, 3> phi() const noexcept { return {u_eq, x_su_eq, y_sb_eq}; }
};

struct SteadyStateDataset {
    std::vector<SteadyStateRow> rows;
    // Without a u_eq column the u channel drops out of both the cost and the enclosure.
    bool has_u_eq = true;
    std::vector<std::string> warnings;

    bool empty() const noexcept { return rows.empty(); }
};

struct TrajectoryRow {
    double t = 0.0;
    double u = 0.0;
    double y_lambda = 0.0;
    double y_sb = 0.0;
    std::array<double, 2> weights{1.0, 1.0}; // (y_lambda, y_sb)
};

struct TrajectoryDataset {
    double sampling_time = 0.0;
    std::vector<TrajectoryRow> rows;

    bool empty() const noexcept { return rows.empty(); }
    double duration() const noexcept { return rows.empty() ? 0.0 : rows.back().t; }

    // Zero-order hold of the u column; only value changes become breakpoints.
    InputSignal input() const;
};

struct MeasurementDataset {
    SteadyStateDataset steady;
    std::vector<TrajectoryDataset> trajectories;
};

SteadyStateDataset parse_steady_state(std::string_view text, const std::string& source = "<text>");
TrajectoryDataset parse_trajectory(std::string_view text, const std::string& source = "<text>");
SteadyStateDataset load_steady_state(const std::filesystem::path& path);
TrajectoryDataset load_trajectory(const std::filesystem::path& path);

// Dispatches on the header (y_lambda_eq -> steady state, otherwise trajectory).
std::variant<SteadyStateDataset, TrajectoryDataset> load_dataset(const std::filesystem::path& path);

void write_steady_state(std::ostream& os, const SteadyStateDataset& ds);
void write_trajectory(std::ostream& os, const TrajectoryDataset& ds);
void write_steady_state(const std::filesystem::path& path, const SteadyStateDataset& ds);
void write_trajectory(const std::filesystem::path& path, const TrajectoryDataset& ds);

struct SynthSettings {
    // steady-state operating grid, linear in y_lambda
    double y_lambda_min = 2.2;
    double y_lambda_max = 5.0;
    std::size_t points = 20;

    // step-response experiment; step u values are offsets from the initial equilibrium inflow
    double y_lambda_start = 3.7;
    double sampling_time = 0.05;
    std::size_t samples = 2000;
    std::vector<InputSignal::Breakpoint> steps{{10.0, 0.06}, {50.0, -0.06}};

    double noise = 0.02; // relative to each channel's data range
    std::uint64_t seed = 42;
};

// The input of the experiment as used by synth_dataset.
InputSignal synth_input(const ParameterVector& p_true, const SynthSettings& settings, const ModelDomain& domain = {});

MeasurementDataset synth_dataset(const ParameterVector& p_true, const SynthSettings& settings,
                                 const IntegratorSettings& integrator, const ModelDomain& domain = {});

} // namespace sputter
