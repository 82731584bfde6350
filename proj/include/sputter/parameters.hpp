#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace sputter {

inline constexpr std::size_t kNumParams = 16;

// Parameter order used everywhere (order vectors, files, coordinate cycling).
enum class Param : std::size_t {
    a11, a112, a113, a12, a123, a212, a22,
    a313, a323, a33c, a33m, b,
    c11, c12, c20, c21,
};

inline constexpr std::array<std::string_view, kNumParams> kParamNames = {
    "a11", "a112", "a113", "a12", "a123", "a212", "a22",
    "a313", "a323", "a33c", "a33m", "b",
    "c11", "c12", "c20", "c21",
};

constexpr std::size_t index(Param p) noexcept { return static_cast<std::size_t>(p); }

std::optional<Param> param_from_name(std::string_view name);

struct ModelDomain {
    double x_rg_max = 1.0;
    std::optional<double> u_max;
};

class ParameterVector {
public:
    ParameterVector() { values_.fill(0.0); }
    explicit ParameterVector(const std::array<double, kNumParams>& values) : values_(values) {}

    double operator[](Param p) const noexcept { return values_[index(p)]; }
    double& operator[](Param p) noexcept { return values_[index(p)]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    std::span<const double, kNumParams> view() const noexcept { return values_; }
    const std::array<double, kNumParams>& values() const noexcept { return values_; }

    bool operator==(const ParameterVector&) const = default;

private:
    std::array<double, kNumParams> values_;
};

// Synthetic nominal parameter set shipped with the library. Satisfies every D_p
// constraint for x_rg_max = 1, keeps the equilibrium inflow positive and produces
// an S-shaped inflow-versus-pressure characteristic (maximum near x_rg = 0.056,
// minimum near x_rg = 0.41).
ParameterVector nominal_parameters();

struct ParameterFile {
    ParameterVector p;
    ModelDomain domain;
};

// Flat JSON object holding exactly the 16 parameter names plus x_rg_max.
ParameterFile read_parameter_file(const std::filesystem::path& path);
ParameterFile parse_parameter_text(std::string_view text);
std::string format_parameter_text(const ParameterVector& p, const ModelDomain& domain);
void write_parameter_file(const std::filesystem::path& path, const ParameterVector& p, const ModelDomain& domain);

} // namespace sputter
