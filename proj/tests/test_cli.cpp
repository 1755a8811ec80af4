#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "srw/cli.hpp"
#include "srw/simulate.hpp"

namespace fs = std::filesystem;
using namespace srw;

namespace {

int run(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::vector<const char*> argv = {"srw-lab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("moments reports the flat d=1 law and regimes") {
    std::string out;
    REQUIRE(run({"moments", "--dim", "1", "--f", "const:0"}, &out) == 0);
    const auto doc = nlohmann::json::parse(out);
    CHECK(doc["mean"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(doc["second_moment"].get<double>() == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(doc["p_odd"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(doc["persistent_regime"] == "diffusive");
    CHECK(doc["reinforced_regime"] == "diffusive");
    CHECK(doc["persistent_C"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("moments flags the subdiffusive linear family") {
    std::string out;
    REQUIRE(run({"moments", "--dim", "1", "--f", "affine:1,0"}, &out) == 0);
    const auto doc = nlohmann::json::parse(out);
    CHECK(doc["mean"] == "inf");
    CHECK(doc["second_moment"] == "inf");
    CHECK(doc["reinforced_regime"] == "subdiffusive (E(T) = inf)");
    CHECK(doc["persistent_regime"] == "non-diffusive (E(T^2) = inf)");
}

TEST_CASE("moments handles the degenerate single-row table") {
    TempDir dir("srw_cli_table");
    const auto table = dir.path / "f.txt";
    std::ofstream(table) << "-1\n";
    std::string out;
    REQUIRE(run({"moments", "--dim", "1", "--f", "table:" + table.string()}, &out) == 0);
    const auto doc = nlohmann::json::parse(out);
    CHECK(doc["mean"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["p_odd"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["reinforced_regime"] == "excluded (d = 1, p = 1)");
}

TEST_CASE("bad configuration exits with code 2") {
    CHECK(run({"moments", "--dim", "1", "--f", "nonsense"}) == 2);
    CHECK(run({"moments", "--dim", "1", "--f", "const:-2"}) == 2);
    CHECK(run({"simulate", "--model", "persistent", "--dim", "1"}) == 2); // no --out
    CHECK(run({"verify", "--suite", "bogus"}) == 2);
    CHECK(run({}) == 2); // a subcommand is required
}

TEST_CASE("the excluded reinforced d=1 family exits with code 2 and names the exclusion") {
    TempDir dir("srw_cli_excl");
    const auto table = dir.path / "f.txt";
    std::ofstream(table) << "-1\n";
    std::string err;
    const int code = run({"simulate", "--model", "reinforced", "--dim", "1", "--f",
                          "table:" + table.string(), "--steps", "10", "--out",
                          (dir.path / "run").string()},
                         nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("P(T odd) < 1") != std::string::npos);
}

TEST_CASE("simulate writes deterministic walk CSV files") {
    TempDir dir_a("srw_cli_sim_a");
    TempDir dir_b("srw_cli_sim_b");
    const std::vector<std::string> base = {
        "simulate", "--model", "persistent", "--dim", "2",    "--f",
        "const:0",  "--paths", "3",          "--steps", "50", "--seed", "42"};
    auto args_a = base;
    args_a.push_back("--out");
    args_a.push_back((dir_a.path / "run").string());
    auto args_b = base;
    args_b.push_back("--out");
    args_b.push_back((dir_b.path / "run").string());
    REQUIRE(run(args_a) == 0);
    REQUIRE(run(args_b) == 0);
    for (int p = 0; p < 3; ++p) {
        const auto name = "run_p" + std::to_string(p) + "_walk.csv";
        const std::string a = slurp(dir_a.path / name);
        const std::string b = slurp(dir_b.path / name);
        REQUIRE(!a.empty());
        CHECK(a == b);
        CHECK(a.rfind("step_index,axis,sign,T,L,x1,x2", 0) == 0);
    }
}

TEST_CASE("coupled simulate writes two files with identical position columns") {
    TempDir dir("srw_cli_coupled");
    REQUIRE(run({"simulate", "--model", "reinforced", "--dim", "2", "--f", "const:1",
                 "--horizon", "100", "--coupled", "--seed", "7", "--out",
                 (dir.path / "pair").string()}) == 0);
    const std::string direct = slurp(dir.path / "pair_p0_senile_direct.csv");
    const std::string timechange = slurp(dir.path / "pair_p0_senile_timechange.csv");
    REQUIRE(!direct.empty());
    CHECK(direct == timechange);
}

TEST_CASE("simulate requires exactly one of steps and horizon") {
    TempDir dir("srw_cli_modes");
    CHECK(run({"simulate", "--model", "persistent", "--dim", "1", "--f", "const:0",
               "--steps", "5", "--horizon", "5", "--out",
               (dir.path / "x").string()}) == 2);
    CHECK(run({"simulate", "--model", "persistent", "--dim", "1", "--f", "const:0",
               "--out", (dir.path / "x").string()}) == 2);
}

TEST_CASE("config file values are overridden by flags") {
    TempDir dir("srw_cli_config");
    const auto config = dir.path / "lab.ini";
    std::ofstream(config) << "[moments]\ndim=2\nf=\"const:0\"\n";
    std::string out;
    REQUIRE(run({"--config", config.string(), "moments"}, &out) == 0);
    CHECK(nlohmann::json::parse(out)["dimension"] == 2);
    REQUIRE(run({"--config", config.string(), "moments", "--dim", "3"}, &out) == 0);
    CHECK(nlohmann::json::parse(out)["dimension"] == 3);
}

TEST_CASE("write_simulation_files validates its job") {
    SimulateJob job;
    job.spec = ReinforcementSpec::constant(1, 0.0);
    job.n_steps = 0;
    job.horizon = 0;
    CHECK_THROWS_AS(write_simulation_files(job, "unused"), config_error);
    job.n_steps = 5;
    job.coupled = true;
    CHECK_THROWS_AS(write_simulation_files(job, "unused"), config_error);
}
