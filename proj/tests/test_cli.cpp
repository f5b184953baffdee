// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "czreach/cli/commands.hpp"
#include "czreach/cli/config.hpp"
#include "czreach/cli/output.hpp"
#include "czreach/serialize.hpp"
#include "support.hpp"

using namespace czreach;
using namespace czreach::cli;
using nlohmann::json;

namespace
{

namespace fs = std::filesystem;

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("czreach_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json example1_config(double alpha, int horizon)
{
    return {{"dynamics", czreach::testing::example1_dynamics()},
            {"initial_set",
             {{"G", {{alpha, 0.0}, {0.0, alpha}}}, {"c", {0.0, 0.0}}, {"A", json::array()}, {"b", json::array()}}},
            {"horizon", horizon},
            {"output", {{"dir", "out"}, {"svg", "sets.svg"}}}};
}

fs::path write_config(const fs::path& dir, const json& j)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("config round trip")
{
    RunConfig cfg;
    cfg.dynamics = czreach::testing::example2_dynamics();
    cfg.initial_set = czreach::testing::example2_x0();
    cfg.disturbance_set = cz_from_interval({Interval(-0.1, 0.2)});
    cfg.horizon = 7;
    cfg.method = Method::Czmv;
    cfg.reduction = {10, 12, false};
    cfg.sigma_mode = SigmaMode::LpTight;
    cfg.seed = 99;
    cfg.output.dir = "results";
    cfg.output.svg = "p.svg";

    const RunConfig back = config_from_json(json::parse(config_to_json(cfg).dump()));
    CHECK(back.dynamics == cfg.dynamics);
    CHECK(back.initial_set.G() == cfg.initial_set.G());
    CHECK(back.initial_set.c() == cfg.initial_set.c());
    CHECK(back.initial_set.A() == cfg.initial_set.A());
    CHECK(back.initial_set.b() == cfg.initial_set.b());
    REQUIRE(back.disturbance_set.has_value());
    CHECK(back.disturbance_set->G() == cfg.disturbance_set->G());
    CHECK(back.horizon == cfg.horizon);
    CHECK(back.method == cfg.method);
    CHECK(back.reduction == cfg.reduction);
    CHECK(back.sigma_mode == cfg.sigma_mode);
    CHECK(back.seed == cfg.seed);
    CHECK(back.output == cfg.output);
}

TEST_CASE("config defaults and validation")
{
    const RunConfig d = config_from_json(example1_config(1.0, 2));
    CHECK(d.method == Method::Alg1);
    CHECK(d.reduction.max_gens == 8);
    CHECK(d.reduction.max_cons == 20);
    CHECK(d.reduction.enabled);
    CHECK(d.sigma_mode == SigmaMode::IntervalBound);

    json j = example1_config(1.0, 2);
    j.erase("horizon");
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    j = example1_config(1.0, 2);
    j["dynamics"] = {"x1"};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    j = example1_config(1.0, 2);
    j["method"] = "czfo";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    j = example1_config(1.0, 2);
    j["reduction"] = {{"max_gens", 1}};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    j = example1_config(1.0, 2);
    j["horizon"] = "two";
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    j = example1_config(1.0, 2);
    j["dynamics"] = {"x1 + ", "x2"};
    CHECK_THROWS_AS(make_problem(config_from_json(j)), ConfigError);

    j = example1_config(1.0, 2);
    j["initial_set"]["G"] = {{1.0, 0.0}};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    const fs::path dir = scratch("bad_json");
    std::ofstream(dir / "broken.json") << "{\"dynamics\": [";
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("variable names")
{
    CHECK(variable_names(2, 1) == std::vector<std::string>{"x1", "x2", "w1"});
}

TEST_CASE("radii CSV schema")
{
    ReachResult r;
    r.enclosures.push_back(czreach::testing::unit_box(2));
    r.enclosures.push_back(czreach::testing::unit_box(2));
    r.enclosures.push_back(czreach::testing::unit_box(2));
    r.radii = {2.0, 2.5, 0.1};
    r.stats.push_back({1, 26, 21, 8, 20, 12, 9, 1.25});
    r.stats.push_back({2, 32, 24, 8, 20, 12, 9, 3.0});
    CHECK(radii_csv(r) == read_file(fs::path(CZREACH_SOURCE_DIR) / "tests/golden/radii.csv"));
}

TEST_CASE("comparison CSV schema")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Comparison c{{1.0, 0.5, 0.25}, {1.0, 2.0, nan}, {1.0, 0.75, 0.5}};
    CHECK(compare_csv(c) == read_file(fs::path(CZREACH_SOURCE_DIR) / "tests/golden/compare.csv"));
}

TEST_CASE("decimal formatting reads back exactly")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i)
    {
        const double v = u(rng) / 7.0;
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("sampling sets")
{
    std::mt19937_64 rng(2);
    const auto box = sample_set(czreach::testing::unit_box(3), 500, rng);
    CHECK(box.size() == 500);
    for (const Eigen::VectorXd& x : box)
        CHECK(x.cwiseAbs().maxCoeff() <= 1.0);

    // one equality constraint forces the null-space fallback
    const ConstrainedZonotope X0 = czreach::testing::example2_x0();
    const auto pts = sample_set(X0, 1000, rng);
    CHECK(pts.size() == 1000);
    Eigen::Vector2d lo = pts.front();
    Eigen::Vector2d hi = pts.front();
    for (const Eigen::VectorXd& x : pts)
    {
        CHECK(contains_point(X0, x, 1e-6));
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    // the samples spread over most of the hull
    const IntervalVector hull = interval_hull(X0);
    CHECK(hi(0) - lo(0) > 0.7 * hull[0].width());
    CHECK(hi(1) - lo(1) > 0.7 * hull[1].width());

    CHECK(sample_set(X0, 0, rng).empty());

    Eigen::MatrixXd A(1, 2);
    A << 1, 1;
    const ConstrainedZonotope empty(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), A,
                                    Eigen::VectorXd::Constant(1, 3.0));
    CHECK_THROWS_AS(sample_set(empty, 1, rng), EmptySet);
}

TEST_CASE("audit is deterministic and catches shrunken enclosures")
{
    const ReachProblem p = czreach::testing::example1(1.0, 2);
    const ReachResult r = reach(p);
    const AuditReport a = audit(p, r.enclosures, 500, 7);
    const AuditReport b = audit(p, r.enclosures, 500, 7);
    REQUIRE(a.steps.size() == 3);
    CHECK(a.violations() == 0);
    for (std::size_t k = 0; k < a.steps.size(); ++k)
    {
        CHECK(a.steps[k].checked == 500);
        CHECK(a.steps[k].max_residual == b.steps[k].max_residual);
        CHECK(a.steps[k].mean_residual == b.steps[k].mean_residual);
    }
    CHECK(audit_json(a) == audit_json(b));

    std::vector<ConstrainedZonotope> shrunk = r.enclosures;
    shrunk[2] = linear_image(0.5 * Eigen::Matrix2d::Identity(), shrunk[2]);
    const AuditReport s = audit(p, shrunk, 500, 7);
    CHECK(s.steps[0].violations == 0);
    CHECK(s.steps[2].violations > 0);
    CHECK(s.steps[2].max_residual > 1e-6);

    const AuditReport none = audit(p, r.enclosures, 0, 7);
    CHECK(none.violations() == 0);
}

TEST_CASE("reach command writes artifacts")
{
    const fs::path dir = scratch("reach");
    const fs::path cfg = write_config(dir, example1_config(1.0, 2));
    CHECK(cmd_reach(cfg) == exit_ok);
    const std::string csv = read_file(dir / "out/radii.csv");
    CHECK(count_lines(csv) == 4);
    CHECK(csv.rfind("k,rad1,n_g_pre,n_c_pre,n_g_post,n_c_post,ms\n", 0) == 0);
    const json enc = json::parse(read_file(dir / "out/enclosures.json"));
    CHECK(enc.at("method") == "alg1");
    CHECK(enc.at("complete") == true);
    REQUIRE(enc.at("steps").size() == 3);
    const ConstrainedZonotope X2 = cz_from_json(enc.at("steps")[2].at("set"));
    CHECK(X2.num_gens() <= 8);
    CHECK(X2.num_cons() <= 20);
    const std::string svg = read_file(dir / "out/sets.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t polygons = 0;
    for (std::size_t pos = svg.find("<polygon"); pos != std::string::npos; pos = svg.find("<polygon", pos + 1))
        ++polygons;
    CHECK(polygons == 3);
    CHECK_FALSE(fs::exists(dir / "out/radii.csv.tmp"));
}

TEST_CASE("empty horizon writes only the initial set")
{
    const fs::path dir = scratch("empty");
    const fs::path cfg = write_config(dir, example1_config(0.5, 0));
    CHECK(cmd_reach(cfg) == exit_ok);
    CHECK(count_lines(read_file(dir / "out/radii.csv")) == 2);
    CHECK(json::parse(read_file(dir / "out/enclosures.json")).at("steps").size() == 1);
}

TEST_CASE("exit codes")
{
    const fs::path dir = scratch("codes");
    json bad = example1_config(1.0, 2);
    bad["dynamics"] = {"x1 +* 2", "x2"};
    CHECK(cmd_reach(write_config(dir, bad)) == exit_config);
    CHECK(cmd_reach(dir / "does_not_exist.json") == exit_config);

    // log maps [0.5, 2] onto an interval containing 0, so step 2 leaves the domain
    const json fails = {{"dynamics", {"log(x1)"}},
                        {"initial_set", {{"G", {{0.75}}}, {"c", {1.25}}, {"A", json::array()}, {"b", json::array()}}},
                        {"horizon", 5},
                        {"output", {{"dir", "out"}}}};
    const fs::path cfg = write_config(dir, fails);
    CHECK(cmd_reach(cfg) == exit_numerical);
    // partial results are still written
    const json enc = json::parse(read_file(dir / "out/enclosures.json"));
    CHECK(enc.at("complete") == false);
    CHECK(enc.at("failed_step") == 2);
    CHECK(enc.at("steps").size() == 2);
}

TEST_CASE("compare command records failures as NaN")
{
    const fs::path dir = scratch("compare");
    json j = {{"dynamics", czreach::testing::example2_dynamics()},
              {"initial_set", to_json(czreach::testing::example2_x0())},
              {"horizon", 32},
              {"output", {{"dir", "."}}}};
    CHECK(cmd_compare(write_config(dir, j)) == exit_ok);
    const std::string csv = read_file(dir / "compare.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,alg1,ia,czmv");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        rows.push_back(line);
    REQUIRE(rows.size() == 33);
    CHECK(rows.back().find(",nan,") != std::string::npos);
    CHECK(rows[1].find("nan") == std::string::npos);
}

TEST_CASE("audit command")
{
    const fs::path dir = scratch("audit");
    const fs::path cfg = write_config(dir, example1_config(0.5, 2));
    CHECK(cmd_audit(cfg, 300, 5) == exit_ok);
    const json a = json::parse(read_file(dir / "out/audit.json"));
    CHECK(a.at("violations") == 0);
    CHECK(a.at("samples") == 300);
    CHECK(a.at("seed") == 5);
    CHECK(a.at("steps").size() == 3);
    CHECK(cmd_audit(cfg, 0, std::nullopt) == exit_ok);
}

TEST_CASE("projection polygons")
{
    const auto poly = projection_polygon(czreach::testing::unit_box(2), 360);
    // the square has four vertices; support sampling visits each of them
    CHECK(poly.size() == 4);
    for (const Eigen::Vector2d& v : poly)
    {
        CHECK(std::abs(v(0)) == doctest::Approx(1.0));
        CHECK(std::abs(v(1)) == doctest::Approx(1.0));
    }
    const auto line = projection_polygon(cz_from_interval({Interval(0, 1)}), 8);
    CHECK(line.size() == 2);
    CHECK_THROWS(projection_polygon(czreach::testing::unit_box(2), 2));
}

TEST_CASE("atomic writes replace the target")
{
    const fs::path dir = scratch("atomic");
    write_atomic(dir / "nested/file.txt", "first");
    write_atomic(dir / "nested/file.txt", "second");
    CHECK(read_file(dir / "nested/file.txt") == "second");
    CHECK_FALSE(fs::exists(dir / "nested/file.txt.tmp"));
}

TEST_CASE("log level from the environment")
{
    setenv("CZREACH_LOG_LEVEL", "debug", 1);
    CHECK(log_level() == LogLevel::Debug);
    setenv("CZREACH_LOG_LEVEL", "error", 1);
    CHECK(log_level() == LogLevel::Error);
    unsetenv("CZREACH_LOG_LEVEL");
    CHECK(log_level() == LogLevel::Warn);
}
