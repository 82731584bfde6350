#include "helpers.hpp"

#include "sputter/cli.hpp"
#include "sputter/csv.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

using namespace sputter;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "sputter");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string small_config(const std::filesystem::path& dir)
{
    const auto path = dir / "config.json";
    test::spit(path, R"({
  "synth": { "points": 8, "samples": 300, "steps": [[3.0, 0.06], [9.0, -0.06]] },
  "analysis": { "samples": 100, "pairs": 5, "t_end": 3.0 }
})");
    return path.string();
}

} // namespace

TEST_CASE("simulate from an equilibrium with constant input is flat")
{
    const auto dir = test::temp_dir("cli_sim");
    // u_eq at y_lambda = 3.7 for the built-in parameters
    const auto steady = run({"static-curve", "--out", dir.string(), "--y-min", "3.7", "--y-max", "3.7", "--points", "1"});
    REQUIRE(steady.code == 0);
    const auto curve = parse_csv(test::slurp(dir / "static_curve.csv"));
    REQUIRE(curve.rows.size() == 1);
    const double u_eq = curve.rows[0][1];

    test::spit(dir / "u.csv", "t,u\n0," + format_double(u_eq) + "\n");
    const auto r = run({"simulate", "--input", (dir / "u.csv").string(), "--y-lambda0", "3.7", "--t-end", "2",
                        "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto traj = parse_csv(test::slurp(dir / "trajectory.csv"));
    const auto iy = *traj.column_index("y_lambda");
    for (const auto& row : traj.rows) CHECK(std::abs(row[iy] - 3.7) < 1e-9);
}

TEST_CASE("upward input step lowers y_lambda")
{
    const auto dir = test::temp_dir("cli_step");
    test::spit(dir / "u.csv", "t,u\n0,0.63157016025125334\n1,0.7\n");
    const auto r = run({"simulate", "--input", (dir / "u.csv").string(), "--y-lambda0", "3.7", "--t-end", "20",
                        "--sample-interval", "0.1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto traj = parse_csv(test::slurp(dir / "trajectory.csv"));
    const auto iy = *traj.column_index("y_lambda");
    const auto it = *traj.column_index("t");
    CHECK(traj.rows.back()[iy] < traj.rows.front()[iy]);
    // after the fast transient has settled the decay is monotone
    for (std::size_t k = 1; k < traj.rows.size(); ++k)
        if (traj.rows[k - 1][it] >= 5.0) CHECK(traj.rows[k][iy] <= traj.rows[k - 1][iy] + 1e-12);
}

TEST_CASE("error exits")
{
    const auto dir = test::temp_dir("cli_err");
    const auto missing = run({"simulate", "--input", (dir / "nope.csv").string(), "--out", dir.string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("nope.csv") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"static-curve", "--y-min", "0.1", "--y-max", "0.2", "--out", dir.string()}).code == 2);
    test::spit(dir / "bad.json", "{\"nonsense\": 1}");
    CHECK(run({"--config", (dir / "bad.json").string(), "synth", "--out", dir.string()}).code == 2);
}

TEST_CASE("static curve CSV")
{
    const auto dir = test::temp_dir("cli_curve");
    REQUIRE(run({"static-curve", "--out", dir.string()}).code == 0);
    const auto curve = parse_csv(test::slurp(dir / "static_curve.csv"));
    CHECK(curve.header == std::vector<std::string>{"y_lambda_eq", "u_eq", "x_ta_eq", "x_su_eq", "y_sb_eq"});
    int changes = 0;
    double prev = 0.0;
    for (std::size_t k = 1; k < curve.rows.size(); ++k) {
        const double d = curve.rows[k][1] - curve.rows[k - 1][1];
        if (k > 1 && d * prev < 0.0) ++changes;
        if (d != 0.0) prev = d;
    }
    CHECK(changes >= 1);
}

TEST_CASE("verify writes reports and flags an invalid parameter set")
{
    const auto dir = test::temp_dir("cli_verify");
    const auto cfg = small_config(dir);
    const auto ok = run({"--config", cfg, "verify", "--out", (dir / "a").string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("overall: PASS") != std::string::npos);
    REQUIRE(run({"--config", cfg, "verify", "--out", (dir / "b").string()}).code == 0);
    CHECK(test::slurp(dir / "a" / "verify_report.txt") == test::slurp(dir / "b" / "verify_report.txt"));
    CHECK(test::slurp(dir / "a" / "verify_summary.json") == test::slurp(dir / "b" / "verify_summary.json"));

    auto text = test::slurp(dir / "a" / "verify_summary.json");
    CHECK(text.find("\"overall\": \"PASS\"") != std::string::npos);

    test::spit(dir / "bad.json", R"({"a11": 0.9, "a112": 1.3, "a113": 60, "a12": 0.2, "a123": 0.3, "a212": 8, "a22": 1,
"a313": 40, "a323": 0.2, "a33c": 0.1, "a33m": 1.2, "b": 1, "c11": 0.8, "c12": 0.5, "c20": 5, "c21": 2, "x_rg_max": 1})");
    const auto bad = run({"--config", cfg, "verify", "--params", (dir / "bad.json").string(), "--out", (dir / "c").string()});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("FAIL D_p: a12 >= a123") != std::string::npos);
}

TEST_CASE("synth then estimate")
{
    const auto dir = test::temp_dir("cli_est");
    const auto cfg = small_config(dir);
    REQUIRE(run({"--config", cfg, "synth", "--out", dir.string(), "--seed", "7"}).code == 0);
    const auto r = run({"--config", cfg, "estimate", "--steady", (dir / "steady_state.csv").string(), "--trajectory",
                        (dir / "trajectory.csv").string(), "--out", (dir / "est").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("certificate a: PASS") != std::string::npos);
    for (const char* f : {"p_hat_a.json", "p_hat_b.json", "certificate.txt", "certificate.json", "static_envelope.csv",
                          "trajectory_envelope_0.csv"})
        CHECK(std::filesystem::exists(dir / "est" / f));
    const auto env = parse_csv(test::slurp(dir / "est" / "static_envelope.csv"));
    CHECK(env.header.size() == 7);

    REQUIRE(run({"--config", cfg, "synth", "--out", (dir / "again").string(), "--seed", "7"}).code == 0);
    CHECK(test::slurp(dir / "trajectory.csv") == test::slurp(dir / "again" / "trajectory.csv"));

    CHECK(run({"estimate", "--out", dir.string()}).code == 2);
}

TEST_CASE("estimate reports infeasibility with exit code 3")
{
    const auto dir = test::temp_dir("cli_far");
    const auto cfg = small_config(dir);
    test::spit(dir / "far.json", R"({"a11": 0.9, "a112": 1.3, "a113": 60, "a12": 0.7, "a123": 0.3, "a212": 24, "a22": 1,
"a313": 12, "a323": 0.2, "a33c": 0.1, "a33m": 1.2, "b": 1, "c11": 0.8, "c12": 0.5, "c20": 5, "c21": 2, "x_rg_max": 1})");
    REQUIRE(run({"--config", cfg, "synth", "--params", (dir / "far.json").string(), "--noise", "0", "--out",
                 dir.string()})
                .code == 0);
    const auto r = run({"--config", cfg, "estimate", "--steady", (dir / "steady_state.csv").string(), "--trajectory",
                        (dir / "trajectory.csv").string(), "--out", (dir / "est").string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("violation") != std::string::npos);
}
