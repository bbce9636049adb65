#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "evo/run.hpp"

using namespace evo;
using evo::cli::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json linear_sin_config(const std::string& out) {
    return json{{"schema", 1},
                {"kind", "linear"},
                {"family", {{"kind", "diagonal"}, {"rates", {-1.0}}}},
                {"forcing", {{"kind", "sin"}}},
                {"stepanov", {{"p", 1.0}, {"window_nodes", 128}}},
                {"g_norm", 0.96},
                {"control", {{"nodes_per_window", 128}, {"tolerance", 5e-9}}},
                {"times", {{"from", 0.0}, {"to", 2.0}, {"step", 0.5}}},
                {"output", {{"path", out}}}};
}

}  // namespace

TEST_CASE("signal catalog round-trips through descriptors") {
    CHECK(cli::make_signal({{"kind", "const"}, {"value", 2.5}}).value1(7.0) == 2.5);
    CHECK(cli::make_signal({{"kind", "const"}, {"value", {1.0, 2.0}}}).dim() == 2);
    CHECK(cli::make_signal({{"kind", "sin"}, {"omega", 2.0}}).value1(0.25) ==
          doctest::Approx(std::sin(0.5)));
    json trig = {{"kind", "trig_sum"},
                 {"offset", 2.5},
                 {"terms", {{{"amplitude", 1.0}, {"omega", 1.0}},
                            {{"amplitude", 0.4}, {"omega", 1.4142135623730951}}}}};
    CHECK(cli::make_signal(trig).value1(0.0) == doctest::Approx(2.5));
    CHECK(cli::make_signal({{"kind", "aa_example"}}).value1(1.0) ==
          doctest::Approx(std::sin(1.0 / (2.0 + std::cos(1.0) + std::cos(std::sqrt(2.0))))));
    CHECK(cli::make_signal({{"kind", "arctan_drift"}}).value1(0.0) ==
          doctest::Approx(-std::numbers::pi / 2));
    json sum = {{"kind", "sum"},
                {"terms", {{{"kind", "sin"}}, {{"kind", "const"}, {"value", 1.0}}}}};
    CHECK(cli::make_signal(sum).value1(0.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(cli::make_signal({{"kind", "nope"}}), ValidationError);
    CHECK_THROWS_AS(cli::make_signal({{"kind", "sin"}, {"omga", 1.0}}), ValidationError);
}

TEST_CASE("family and measure catalogs reject unknown kinds") {
    CHECK(cli::make_measure({{"kind", "lebesgue"}}).satisfies_M());
    CHECK(cli::make_measure({{"kind", "paper_sec4"}}).density(1.0) == 1.0);
    CHECK_THROWS_AS(cli::make_measure({{"kind", "counting"}}), ValidationError);
    CHECK(cli::make_family({{"kind", "diagonal"}, {"rates", {-1.0, 1.0}}})->dim() == 2);
    CHECK_THROWS_AS(cli::make_family({{"kind", "spectral"}}), ValidationError);
    // declared constants may not be stronger than the analytic ones
    CHECK_THROWS_AS(
        cli::make_family({{"kind", "diagonal"}, {"rates", {-1.0}}, {"delta", 2.0}}),
        ValidationError);
}

TEST_CASE("time range parsing accepts both spellings") {
    cli::TimeRange r = cli::parse_time_range_string("0:10:0.5");
    CHECK(r.count() == 21);
    cli::TimeRange r2 = cli::parse_time_range(json{{"from", -1.0}, {"to", 1.0}, {"step", 0.25}},
                                              "test");
    CHECK(r2.count() == 9);
    CHECK_THROWS_AS(cli::parse_time_range_string("0;10;1"), ValidationError);
    CHECK_THROWS_AS(cli::parse_time_range(json{{"from", 1.0}, {"to", 0.0}, {"step", 0.5}}, "t"),
                    ValidationError);
}

TEST_CASE("linear scenario: sin forcing hits the closed form and is deterministic") {
    const std::string out = "test_cli_linear.csv";
    const json config = linear_sin_config(out);
    const json report = cli::run_scenario(config);
    CHECK(report["scenario"] == config);
    CHECK(report["certificates"]["tail_bound"].get<double>() <= 5e-9);
    REQUIRE(report["outputs"].size() == 1);

    const std::string first = slurp(out);
    std::istringstream is(first);
    std::string header, row0;
    std::getline(is, header);
    std::getline(is, row0);
    CHECK(header == "t,u0,tail_bound");
    double t, u;
    char comma;
    std::istringstream rs(row0);
    rs >> t >> comma >> u;
    CHECK(t == 0.0);
    CHECK(std::fabs(u - (-0.5)) <= 1e-8);

    cli::run_scenario(config);
    CHECK(slurp(out) == first);  // identical configs, identical bytes
    std::remove(out.c_str());
}

TEST_CASE("validation failures name the offending key and write nothing") {
    json config = linear_sin_config("should_not_exist.csv");
    config["control"]["tolerance"] = -1.0;
    CHECK_THROWS_AS(cli::run_scenario(config), ValidationError);
    std::ifstream probe("should_not_exist.csv");
    CHECK(!probe.good());

    json unknown = linear_sin_config("also_not.csv");
    unknown["extra_key"] = 1;
    try {
        cli::run_scenario(unknown);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("extra_key") != std::string::npos);
    }

    json noschema = {{"kind", "linear"}};
    CHECK_THROWS_AS(cli::run_scenario(noschema), ValidationError);
    json badschema = linear_sin_config("x.csv");
    badschema["schema"] = 2;
    CHECK_THROWS_AS(cli::run_scenario(badschema), ValidationError);
}

TEST_CASE("semilinear scenario emits contraction certificates") {
    json config = {{"schema", 1},
                   {"kind", "semilinear"},
                   {"family", {{"kind", "diagonal"}, {"rates", {-1.0}}}},
                   {"nonlinearity",
                    {{"kind", "linear_plus_signal"}, {"coeff", 0.1}, {"signal", {{"kind", "sin"}}}}},
                   {"stepanov", {{"p", 1.0}, {"window_nodes", 96}}},
                   {"control", {{"nodes_per_window", 96}, {"tolerance", 1e-9}}},
                   {"window", {{"from", -14.0}, {"to", 6.0}, {"step", 0.05}}},
                   {"tol", 1e-8},
                   {"output", {{"path", "test_cli_semilinear.csv"}}}};
    const json report = cli::run_scenario(config);
    const json& cert = report["certificates"];
    CHECK(cert["admissible"].get<bool>());
    CHECK(cert["kappa"].get<double>() == doctest::Approx(0.3163953413738653).epsilon(1e-9));
    CHECK(cert["converged"].get<bool>());
    CHECK(cert["residual"].get<double>() <= 1e-5);
    CHECK(cert["iterations"].get<int>() <= 25);
    std::remove("test_cli_semilinear.csv");
}

TEST_CASE("diagnostics: ergodic means decrease for the drift under the sec4 measure") {
    json config = {{"schema", 1},
                   {"kind", "diagnostics"},
                   {"op", "ergodic-mean"},
                   {"signal", {{"kind", "arctan_drift"}}},
                   {"measure", {{"kind", "paper_sec4"}}},
                   {"grid_step", 0.02},
                   {"r_values", {10.0, 100.0, 1000.0}}};
    const json report = cli::run_scenario(config);
    const json& means = report["certificates"]["means"];
    REQUIRE(means.size() == 3);
    const double m10 = means[0]["mean"].get<double>();
    const double m100 = means[1]["mean"].get<double>();
    const double m1000 = means[2]["mean"].get<double>();
    CHECK(m10 > m100);
    CHECK(m100 > m1000);
    CHECK(m1000 <= 0.02);
}

TEST_CASE("diagnostics: dichotomy-check passes for catalog families") {
    json config = {{"schema", 1},
                   {"kind", "diagnostics"},
                   {"op", "dichotomy-check"},
                   {"family", {{"kind", "diagonal"}, {"rates", {-1.0, 1.0}}}},
                   {"trials", 300},
                   {"tolerance", 1e-10}};
    const json report = cli::run_scenario(config);
    CHECK(report["certificates"]["worst_defect"].get<double>() <= 1e-10);
    CHECK(report["certificates"]["trials"].get<int>() == 300);
}

TEST_CASE("diagnostics: shift defect with near-period search") {
    json config = {{"schema", 1},
                   {"kind", "diagnostics"},
                   {"op", "shift-defect"},
                   {"signal", {{"kind", "sin"}}},
                   {"stepanov", {{"p", 1.0}, {"window_nodes", 64}}},
                   {"t_range", {{"lo", 0.0}, {"hi", 6.0}}},
                   {"grid_step", 0.05},
                   {"tau", 2.0 * std::numbers::pi}};
    const json report = cli::run_scenario(config);
    CHECK(report["certificates"]["defect"].get<double>() <= 1e-10);
}

TEST_CASE("rd-demo scenario wires solver, oracle and bi-AA table together") {
    json config = {
        {"schema", 1},
        {"kind", "rd_demo"},
        {"grid", {{"L", 20.0}, {"n", 101}}},
        {"delta", {{"kind", "sin"}, {"offset", 2.5}}},
        {"alpha", {{"kind", "sin"}, {"amplitude", 0.5}, {"offset", -2.0}}},
        {"delta_floor", 1.0},
        {"omega", 1.5},
        {"nonlinearity",
         {{"a", {{"kind", "sin"}, {"amplitude", 0.05}}},
          {"g_scale", 0.1},
          {"profile", {{"kind", "gaussian"}, {"amplitude", 0.5}, {"sigma", 1.0}}}}},
        {"measure", {{"kind", "paper_sec4"}}},
        {"stepanov", {{"p", 1.0}, {"window_nodes", 12}}},
        {"forcing_sup_bound", 4.2},
        {"control", {{"nodes_per_window", 12}, {"tolerance", 1e-4}}},
        {"window", {{"from", 0.0}, {"to", 2.0}, {"step", 0.2}}},
        {"tol", 1e-5},
        {"max_iter", 15},
        {"oracle", {{"dt", 0.02}}},
        {"bi_aa", {{"q_max", 50}, {"samples", 5}}},
        {"output", {{"path", "test_cli_rd.csv"}, {"format", "svg"}}}};
    const json report = cli::run_scenario(config);
    const json& cert = report["certificates"];
    CHECK(cert["admissible"].get<bool>());
    CHECK(cert["converged"].get<bool>());
    // coarse grid and window, but the two routes still agree to a few percent
    CHECK(cert["oracle_rel_l2_error"].get<double>() <= 5e-2);
    CHECK(cert["bi_aa"]["defect"].get<double>() < 1.0);
    REQUIRE(report["outputs"].size() == 2);

    // certificates are bit-reproducible under re-running
    const json again = cli::run_scenario(config);
    CHECK(again["certificates"] == cert);
    const std::string csv = slurp("test_cli_rd.csv");
    CHECK(csv.substr(0, 22) == "t,x,u_picard,u_fd\n0,-2");
    std::remove("test_cli_rd.csv");
    std::remove("test_cli_rd.svg");
}

TEST_CASE("unknown scenario kinds are rejected") {
    CHECK_THROWS_AS(cli::run_scenario(json{{"schema", 1}, {"kind", "mystery"}}),
                    ValidationError);
}
