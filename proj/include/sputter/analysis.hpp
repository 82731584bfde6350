#pragma once

#include "sputter/model.hpp"
#include "sputter/sim.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sputter {

enum class Sign : std::int8_t { minus = -1, zero = 0, plus = 1, undefined = 2 };

char sign_char(Sign s) noexcept; // '-', '0', '+', '*'

// Expected sign pattern. '+' admits observed zeros (nonnegative), '-' likewise,
// '0' demands zero within zero_tol, '*' must show both signs across the samples.
class SignPattern {
public:
    SignPattern() = default;
    SignPattern(std::size_t rows, std::size_t cols, Sign fill = Sign::zero);
    // Rows separated by ';', one character per entry, e.g. "-++;+-+;++-".
    static SignPattern parse(std::string_view text);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Sign at(std::size_t i, std::size_t j) const noexcept { return cells_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Sign s) noexcept { cells_[i * cols_ + j] = s; }
    std::string to_string() const;
    bool operator==(const SignPattern&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Sign> cells_;
};

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * cols + j]; }
};

using VectorMap = std::function<std::vector<double>(std::span<const double>)>;

// Central differences with step h * max(1, |z_j|) for each coordinate j in wrt
// (all coordinates when wrt is empty). Exceptions from the map propagate.
Matrix jacobian_fd(const VectorMap& map, std::span<const double> point, double h = 1e-6,
                   std::span<const std::size_t> wrt = {});

struct SampledDomain {
    std::size_t samples = 1000;
    std::vector<std::pair<double, double>> bounds; // per input coordinate
    std::uint64_t seed = 1;
};

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v) noexcept;

struct SignMismatch {
    std::size_t sample = 0;
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
    std::vector<double> point;
};

struct CellWitness {
    std::size_t row = 0;
    std::size_t col = 0;
    std::optional<std::vector<double>> plus_point;
    std::optional<std::vector<double>> minus_point;
};

struct SignCertification {
    std::string name;
    Verdict verdict = Verdict::pass;
    SignPattern expected;
    SignPattern observed; // '*' where both signs were seen, otherwise the widest class seen
    std::size_t samples = 0;
    std::size_t rejected = 0; // draws outside the admissible set
    std::vector<SignMismatch> mismatches; // first few
    std::size_t mismatch_count = 0;
    std::vector<CellWitness> undefined_witnesses;
};

struct SignCheckOptions {
    double zero_tol = 1e-9;
    double h = 1e-6;
    std::vector<std::size_t> wrt;                                  // empty: all coordinates
    std::function<bool(std::span<const double>)> accept = nullptr; // rejection sampling filter
};

SignCertification certify_sign_pattern(const std::string& name, const VectorMap& map, const SampledDomain& domain,
                                       const SignPattern& expected, const SignCheckOptions& options = {});

struct AnalysisSettings {
    std::size_t samples = 1000;
    double perturbation = 0.1; // relative half-width of the sampled parameter box around p
    double zero_tol = 1e-9;
    double h = 1e-6;
    std::uint64_t seed = 1;
    std::size_t pairs = 200;
    double t_end = 20.0;
    double dt = 1e-3;
    double tau_sim = 1e-6;
    std::size_t static_grid_points = 50;
    double y_lambda_min = 2.2;
    double y_lambda_max = 5.0;
    std::size_t s_shape_points = 200;
};

struct OrderCheck {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::size_t pairs = 0;
    std::size_t grid_points = 0;
    double worst_violation = 0.0; // max of r-weighted differences, <= tolerance when ordered
    std::string witness;          // description of the worst pair
};

// Pairs x0^a <= x0^b, u^a <= u^b with a shared p drawn around p.
OrderCheck certify_cooperativity(const ParameterVector& p, const AnalysisSettings& settings,
                                 const ModelDomain& domain = {});

// Pairs p^a <=_{r_p^f} p^b with shared x0 and u.
OrderCheck certify_parameter_monotonicity(const ParameterVector& p, const AnalysisSettings& settings,
                                          const ModelDomain& domain = {});

// Pairs p^a <=_{r_p} p^b with c11, c12 pinned: output trajectories per r_y from
// equilibrium starts, and static characteristics per r_phi on a y_lambda grid.
std::pair<OrderCheck, OrderCheck> certify_output_monotonicity(const ParameterVector& p,
                                                              const AnalysisSettings& settings,
                                                              const ModelDomain& domain = {});

struct SShapeWitness {
    Verdict verdict = Verdict::fail;
    std::size_t sign_changes = 0;
    std::vector<double> turning_points; // y_lambda_eq where du changes sign
};

SShapeWitness s_shape_witness(const ParameterVector& p, const AnalysisSettings& settings,
                              const ModelDomain& domain = {});

struct VerificationReport {
    std::vector<SignCertification> patterns;
    std::vector<OrderCheck> orders;
    SShapeWitness s_shape;
    std::vector<std::string> domain_violations;

    Verdict overall() const noexcept;
};

// All sign-pattern certificates in parameter-order notation, sampled around p.
std::vector<SignCertification> certify_all_patterns(const ParameterVector& p, const AnalysisSettings& settings,
                                                    const ModelDomain& domain = {});

// Full suite. A p outside D_p yields a report with the violations and FAIL, without sampling.
VerificationReport verify(const ParameterVector& p, const AnalysisSettings& settings, const ModelDomain& domain = {});

void write_verification_report(std::ostream& os, const VerificationReport& report);
std::string verification_summary_json(const VerificationReport& report);

} // namespace sputter
