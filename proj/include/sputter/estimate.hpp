#pragma once

#include "sputter/data.hpp"
#include "sputter/model.hpp"
#include "sputter/order.hpp"
#include "sputter/sim.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace sputter {

// c11 and c12 stay at their nominal values: the inflow channel of the static
// characteristic is only ordered when both models share x_rg_eq.
constexpr bool is_pinned(std::size_t i) noexcept
{
    return i == index(Param::c11) || i == index(Param::c12);
}

struct EstimationSettings {
    double delta0 = 0.01;
    double growth = 1.5;
    double delta_max = 0.95;
    double eps_c = 1e-4;      // relative per-coordinate resolution of the contraction
    int max_cycles = 50;
    double tau_enc = 1e-9;    // trajectory enclosure tolerance
    double tau_static = 0.0;  // closed-form enclosure tolerance
    IntegratorSettings integrator{};
    ModelDomain domain{};
};

// Box [(1 - delta) p0, (1 + delta) p0] with c11, c12 pinned, split into the two
// order cones below and above p0 with respect to r_p.
class SearchDomain {
public:
    SearchDomain(const ParameterVector& p0, double delta, const ModelDomain& domain = {});

    const ParameterVector& nominal() const noexcept { return p0_; }
    double delta() const noexcept { return delta_; }
    double lower(std::size_t i) const noexcept;
    double upper(std::size_t i) const noexcept;

    // diag(1 - delta r_p) p0 for side a, diag(1 + delta r_p) p0 for side b.
    ParameterVector corner(Side side) const;

    bool contains(const ParameterVector& p) const noexcept;
    bool in_cone(const ParameterVector& p, Side side) const;

private:
    ParameterVector p0_;
    double delta_;
};

struct CostWeights {
    std::vector<std::array<double, 3>> steady;                  // (u, x_su, y_sb) per steady-state row
    std::vector<std::vector<std::array<double, 2>>> trajectory; // (y_lambda, y_sb) per sample

    static CostWeights from_dataset(const MeasurementDataset& data);
    // At least one positive weight per used channel.
    void validate(const MeasurementDataset& data) const;
};

// Per-channel worst margins; a side satisfies the enclosure when every margin is >= -tolerance.
struct EnclosureCertificate {
    bool feasible = true;
    std::array<double, 3> static_margin{}; // (u, x_su, y_sb)
    std::array<double, 2> trajectory_margin{};
    std::string first_violation;         // empty when feasible
};

struct CandidateEvaluation {
    EnclosureCertificate certificate;
    double cost_static = 0.0;
    double cost_trajectory = 0.0;
    double cost() const noexcept { return cost_static + cost_trajectory; }
};

double cost_static(const ParameterVector& p, const SteadyStateDataset& data, const CostWeights& weights,
                   const ModelDomain& domain = {});

double cost_trajectory(const ParameterVector& p, const MeasurementDataset& data, const CostWeights& weights,
                       const IntegratorSettings& integrator, const ModelDomain& domain = {});

// Simulated model output on the grid of a measured trajectory, started from the
// equilibrium that matches the first measured y_lambda.
Trajectory simulate_experiment(const ParameterVector& p, const TrajectoryDataset& data,
                               const IntegratorSettings& integrator, const ModelDomain& domain = {});

// Enclosure check for one side plus the cost, from a single simulation per trajectory.
CandidateEvaluation evaluate_candidate(const ParameterVector& p, Side side, const MeasurementDataset& data,
                                       const CostWeights& weights, const EstimationSettings& settings);

struct ExpansionResult {
    double delta = 0.0;
    ParameterVector p_a;
    ParameterVector p_b;
    int probes = 0;
};

ExpansionResult expand_until_feasible(const ParameterVector& p0, const MeasurementDataset& data,
                                      const CostWeights& weights, const EstimationSettings& settings);

struct ContractionResult {
    ParameterVector p;
    CandidateEvaluation evaluation;
    double start_cost = 0.0;
    double ray_t = 0.0;
    int cycles = 0;
    int evaluations = 0;
};

ContractionResult contract(Side side, const ParameterVector& p_start, const ParameterVector& p0,
                           const MeasurementDataset& data, const CostWeights& weights,
                           const EstimationSettings& settings);

// W = (1/16) sum_i 2 |b_i - a_i| / |b_i + a_i|, terms with a_i + b_i = 0 count as 0.
double average_relative_width(const ParameterVector& a, const ParameterVector& b);

struct IntervalEstimate {
    ParameterVector p_hat_a;
    ParameterVector p_hat_b;
    double delta = 0.0;
    EnclosureCertificate certificate_a;
    EnclosureCertificate certificate_b;
    double width = 0.0;
    double cost_a = 0.0;
    double cost_b = 0.0;
    bool ordered = false;
    int evaluations = 0;
    std::vector<std::string> warnings;

    bool feasible() const noexcept { return certificate_a.feasible && certificate_b.feasible && ordered; }
};

IntervalEstimate estimate_interval(const ParameterVector& p0, const MeasurementDataset& data,
                                   const EstimationSettings& settings);
IntervalEstimate estimate_interval(const ParameterVector& p0, const MeasurementDataset& data, const CostWeights& weights,
                                   const EstimationSettings& settings);

// Text report of an estimate (parameters, certificates, width).
void write_certificate_report(std::ostream& os, const IntervalEstimate& est);

// Static-curve band on a y_lambda grid:
// y_lambda_eq,u_a,u_b,x_su_a,x_su_b,y_sb_a,y_sb_b
void write_static_envelope(std::ostream& os, const IntervalEstimate& est, const std::vector<double>& y_lambda_grid,
                           const ModelDomain& domain = {});

// Trajectory band on the measured grid:
// t,u,y_lambda_m,y_lambda_a,y_lambda_b,y_sb_m,y_sb_a,y_sb_b
void write_trajectory_envelope(std::ostream& os, const IntervalEstimate& est, const TrajectoryDataset& data,
                               const IntegratorSettings& integrator, const ModelDomain& domain = {});

} // namespace sputter
