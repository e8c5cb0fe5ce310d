#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twistlaw/error.hpp"
#include "twistlaw_cli/commands.hpp"

using namespace twistlaw;
using namespace twistlaw::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("twistlaw_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs a command twice into the same directory and compares every file byte for byte.
template <class Cmd>
void check_reproducible(Cmd cmd, const RunConfig& cfg) {
    const auto first = cmd(cfg);
    REQUIRE_FALSE(first.files.empty());
    std::vector<std::string> bytes;
    for (const auto& f : first.files) bytes.push_back(slurp(f));
    const auto second = cmd(cfg);
    REQUIRE(second.files == first.files);
    for (std::size_t k = 0; k < bytes.size(); ++k) CHECK(slurp(second.files[k]) == bytes[k]);
    CHECK(second.text == first.text);
}

RunConfig base(const std::string& name) {
    RunConfig c;
    c.out_dir = scratch(name);
    c.seed = 3;
    return c;
}

} // namespace

TEST_CASE("cf-dv: preconditions") {
    auto c = base("cfdv_pre");
    c.n = 1;
    CHECK_THROWS_AS(cmd_cf_dv(c), UsageError);
    c.n = 200;
    c.samples = 5;
    CHECK_THROWS_AS(cmd_cf_dv(c), UsageError);
    c.samples = 10;
    c.seed.reset();
    CHECK_THROWS_AS(cmd_cf_dv(c), UsageError);
    c.seed = 1;
    c.bits = 64;
    CHECK_THROWS_AS(cmd_cf_dv(c), UsageError);
}

TEST_CASE("cf-dv: report contents and byte-identical reruns") {
    auto c = base("cfdv");
    c.n = 300;
    c.samples = 12;
    const auto r = cmd_cf_dv(c);
    CHECK(r.report["target"].get<double>() == doctest::Approx(1.4426950408889634));
    CHECK(r.report["checkpoints"].size() == 2);
    CHECK(r.report.contains("config"));
    check_reproducible(cmd_cf_dv, c);
}

TEST_CASE("sim: torus smoke run writes documented files") {
    auto c = base("sim_torus");
    c.eps = 0.04;
    c.T_grid = {200.0};
    c.rays = 2;
    const auto r = cmd_sim(c);
    REQUIRE(r.files.size() == 2);
    for (const auto& f : r.files) CHECK(fs::exists(f));
    const std::string csv = slurp(r.files[0]);
    CHECK(csv.rfind("# twistlaw", 0) == 0);
    CHECK(csv.find("# config: ") != std::string::npos);
    for (const char* col : {"trajectory_id", "label", "t_entry", "t_exit", "phi", "phi_max", "E", "E_area", "tw",
                            "complete", "kept"})
        CHECK(csv.find(std::string("# column ") + col + ":") != std::string::npos);
    check_reproducible(cmd_sim, c);
}

TEST_CASE("sim: L-origami header reports the stratum") {
    auto c = base("sim_l");
    c.surface = "3; (1 2); (1 3)";
    c.T_grid = {100.0};
    c.rays = 1;
    const auto r = cmd_sim(c);
    CHECK(slurp(r.files[0]).find("stratum {2}") != std::string::npos);
    CHECK(r.report["stratum"] == nlohmann::json::array({2}));
}

TEST_CASE("sim: rejects disconnected surfaces and eps above eps0") {
    auto c = base("sim_bad");
    c.surface = "2; (); ()";
    CHECK_THROWS_WITH_AS(cmd_sim(c), doctest::Contains("components"), InvalidArgument);
    c.surface = "torus";
    c.eps = 0.6;
    CHECK_THROWS_WITH_AS(cmd_sim(c), doctest::Contains("eps0 = 0.5"), UsageError);
    c.eps.reset();
    c.surface = "3; (1 2 4); ()";
    CHECK_THROWS_AS(cmd_sim(c), ParseError);
}

TEST_CASE("sim: exact rational endpoint ends with an incomplete excursion") {
    auto c = base("sim_theta");
    c.seed.reset();
    c.theta = "3/7";
    c.T_grid = {50.0};
    const auto r = cmd_sim(c);
    const std::string csv = slurp(r.files[0]);
    CHECK(csv.find("3/7#0") != std::string::npos);
}

TEST_CASE("oracle: preconditions and reproducibility") {
    auto c = base("oracle");
    c.oracle_samples = 2000;
    check_reproducible(cmd_oracle, c);
    c.eps = 0.6;
    CHECK_THROWS_WITH_AS(cmd_oracle(c), doctest::Contains("exceeds eps0"), UsageError);
    c.eps.reset();
    c.ladder = {1.0, 2.0};
    CHECK_THROWS_AS(cmd_oracle(c), InvalidArgument);
    c.ladder = {1.0, 2.0, 4.0};
    c.oracle_samples = 10;
    CHECK_THROWS_AS(cmd_oracle(c), UsageError);
}

TEST_CASE("estimate: refuses tiny ensembles; small run is reproducible and complete") {
    auto c = base("estimate");
    c.rays = 1;
    CHECK_THROWS_AS(cmd_estimate(c), UsageError);
    c.rays = 30;
    c.T_grid = {40.0, 80.0};
    c.oracle_samples = 2000;
    c.bootstrap = 200;
    const auto r = cmd_estimate(c);
    for (const char* key : {"surface", "eps", "xi", "s_xi", "T_grid", "per_T", "estimate", "ci", "oracle_transform",
                            "oracle_thin", "seed", "version", "config"})
        CHECK(r.report.contains(key));
    CHECK(r.report["ci"]["lo"].get<double>() <= r.report["estimate"].get<double>());
    CHECK(r.report["estimate"].get<double>() <= r.report["ci"]["hi"].get<double>());
    check_reproducible(cmd_estimate, c);
}

TEST_CASE("decompose: cylinder table of the L-origami") {
    RunConfig c;
    c.surface = "3; (1 2); (1 3)";
    c.directions = {"1/0", "0/1", "1/1"};
    const auto r = cmd_decompose(c);
    CHECK(r.text.find("stratum {2}") != std::string::npos);
    CHECK(r.files.empty());
    c.directions = {"2/4"};
    CHECK_THROWS_AS(cmd_decompose(c), InvalidArgument);
    c.directions = {"x"};
    CHECK_THROWS_AS(cmd_decompose(c), ParseError);
}

TEST_CASE("default output directory comes from the environment") {
    const fs::path dir = scratch("env");
    ::setenv("TWISTLAW_OUT", dir.c_str(), 1);
    CHECK(default_out_dir() == dir);
    RunConfig c;
    c.seed = 1;
    c.n = 200;
    c.samples = 10;
    const auto r = cmd_cf_dv(c);
    REQUIRE_FALSE(r.files.empty());
    CHECK(r.files[0].parent_path() == dir);
    ::unsetenv("TWISTLAW_OUT");
}

TEST_CASE("config echo carries every parameter") {
    RunConfig c;
    c.seed = 9;
    const auto j = config_echo("sim", c);
    CHECK(j["command"] == "sim");
    CHECK(j["seed"] == 9);
    CHECK(j.contains("T_grid"));
    CHECK(j.contains("surface"));
}
