#pragma once

#include "sputter/parameters.hpp"
#include "sputter/rng.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace test {

// Small integer parameter set used by the hand-evaluated examples.
inline sputter::ParameterVector simple_params()
{
    using enum sputter::Param;
    sputter::ParameterVector p;
    p[a11] = 1;
    p[a112] = 1;
    p[a113] = 1;
    p[a12] = 1;
    p[a123] = 1;
    p[a212] = 2;
    p[a22] = 1;
    p[a313] = 1;
    p[a323] = 1;
    p[a33c] = 1;
    p[a33m] = 2;
    p[b] = 3;
    p[c11] = 1;
    p[c12] = 0.5;
    p[c20] = 5;
    p[c21] = 2;
    return p;
}

// Uniform draw in the +-frac box around p.
inline sputter::ParameterVector jitter(const sputter::ParameterVector& p, sputter::Rng& rng, double frac)
{
    auto q = p;
    for (std::size_t i = 0; i < sputter::kNumParams; ++i) q[i] *= 1.0 + rng.uniform(-frac, frac);
    return q;
}

inline std::filesystem::path temp_dir(const std::string& name)
{
    auto d = std::filesystem::temp_directory_path() / ("sputter_test_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace test
