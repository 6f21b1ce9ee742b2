#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnet/cli.hpp"
#include "uavnet/policy_opt.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace uavnet;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::initializer_list<std::string> args) {
    std::vector<std::string> store{"uavnet"};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : store) argv.push_back(s.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string scenario(const char* name) { return std::string(UAVNET_SCENARIO_DIR) + "/" + name; }

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("uavnet_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("evaluate prints one row per transmitter under a fixed header") {
    const Run r = cli({"evaluate", "--scenario", scenario("table1.yaml")});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) ==
          "node,role,fading,target,beta,beta_max,mu,p_dly,p_ov,p_out,p_loss_exact,p_loss_first_order,r_n,"
          "r_n_exact,unstable,clamped");
    CHECK(count_lines(r.out) == 11);
}

TEST_CASE("usage and validation errors exit with code 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"evaluate"}).code == 2);
    CHECK(cli({"evaluate", "--scenario", "/nonexistent.yaml"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"optimize", "--scenario", scenario("desk3.yaml"), "--algo", "nope"}).code == 2);
}

TEST_CASE("a dangling target names the missing node") {
    const fs::path d = temp_dir("dangling");
    const auto f = write(d / "s.yaml",
                         "nodes:\n"
                         "  - {id: U, role: uav-main, pos: [50, 50, 30]}\n"
                         "  - {id: S, role: source, pos: [10, 10, 0], target: Q7, fading: rician}\n");
    const Run r = cli({"evaluate", "--scenario", f.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("Q7") != std::string::npos);
}

TEST_CASE("unknown keys are reported with their line") {
    const fs::path d = temp_dir("unknown");
    const auto f = write(d / "s.yaml",
                         "radio:\n"
                         "  num_channels: 14\n"
                         "  carrier_frequency: 2.4e9\n"
                         "nodes:\n"
                         "  - {id: U, role: uav-main, pos: [50, 50, 30]}\n");
    const Run r = cli({"evaluate", "--scenario", f.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("carrier_frequency") != std::string::npos);
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("threshold overrides outside the bound name the bound") {
    const Run r = cli({"evaluate", "--scenario", scenario("desk3.yaml"), "--beta", "B=9"});
    CHECK(r.code == 2);
    CHECK(r.err.find("beta_max") != std::string::npos);
    CHECK(r.err.find("'B'") != std::string::npos);
    CHECK(cli({"evaluate", "--scenario", scenario("desk3.yaml"), "--beta", "B=-1"}).code == 2);
    CHECK(cli({"evaluate", "--scenario", scenario("desk3.yaml"), "--beta", "Z=1"}).code == 2);
    CHECK(cli({"evaluate", "--scenario", scenario("desk3.yaml"), "--beta", "B=1.5"}).code == 0);
}

TEST_CASE("optimize writes a result that evaluates back to the same throughput") {
    const fs::path d = temp_dir("roundtrip");
    const Run r = cli({"optimize", "--scenario", scenario("desk3.yaml"), "--algo", "ia-dtc", "--out", d.string()});
    REQUIRE(r.code == 0);
    const auto result = nlohmann::json::parse(slurp(d / "result.json"));
    CHECK(result["algo"] == "ia-dtc");
    CHECK(result["beta"].size() == 3);
    CHECK(first_line(slurp(d / "trace.csv")) == "round,node,beta,r_n");

    const fs::path e = temp_dir("roundtrip_eval");
    const Run ev = cli({"evaluate", "--scenario", scenario("desk3.yaml"), "--beta-file", (d / "result.json").string(),
                        "--out", e.string(), "--format", "json"});
    REQUIRE(ev.code == 0);
    const auto rows = nlohmann::json::parse(slurp(e / "evaluate.json"));
    bool found = false;
    for (const auto& row : rows["nodes"]) {
        if (row["node"] == result["source"]) {
            CHECK(std::abs(row["r_n"].get<double>() - result["r_star"].get<double>()) <= 1e-9);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("beta written to result.json reproduces the library result exactly") {
    const fs::path d = temp_dir("precision");
    REQUIRE(cli({"optimize", "--scenario", scenario("desk3.yaml"), "--algo", "ia-dtc", "--out", d.string()}).code == 0);
    const auto result = nlohmann::json::parse(slurp(d / "result.json"));
    const NetworkModel m(load_scenario(scenario("desk3.yaml")));
    const auto dtc = ia_dtc(m);
    PolicyVector pv = m.default_policy();
    for (std::size_t i = 0; i < m.size(); ++i) {
        pv.beta[i] = result["beta"][m.transmitters()[i].id].get<double>();
        CHECK(pv.beta[i] == dtc.policy.beta[i]);
    }
    const std::size_t s = *m.source_index();
    CHECK(std::abs(m.evaluate(s, pv.beta).r_n - result["r_star"].get<double>()) <= 1e-12 * 80.0);
}

TEST_CASE("reruns are byte-identical") {
    const fs::path a = temp_dir("rerun_a");
    const fs::path b = temp_dir("rerun_b");
    for (const auto& d : {a, b}) {
        REQUIRE(cli({"optimize", "--scenario", scenario("desk3.yaml"), "--algo", "ia-tc", "--out", d.string()}).code == 0);
    }
    CHECK(slurp(a / "result.json") == slurp(b / "result.json"));
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(first_line(slurp(a / "trace.csv")) == "iteration,beta_rice,beta_ray,beta_n,r_best");
}

TEST_CASE("aggressive baseline sets every threshold to zero") {
    const fs::path d = temp_dir("aggressive");
    REQUIRE(cli({"optimize", "--scenario", scenario("desk3.yaml"), "--algo", "baseline:aggressive", "--out",
                 d.string()})
                .code == 0);
    const auto result = nlohmann::json::parse(slurp(d / "result.json"));
    for (const auto& [id, b] : result["beta"].items()) CHECK(b.get<double>() == 0.0);
}

TEST_CASE("ia-dtc on the reference network returns one threshold per transmitter") {
    const fs::path d = temp_dir("table1");
    REQUIRE(cli({"optimize", "--scenario", scenario("table1.yaml"), "--algo", "ia-dtc", "--out", d.string()}).code ==
            0);
    const auto result = nlohmann::json::parse(slurp(d / "result.json"));
    CHECK(result["beta"].size() == 10);
    CHECK(result["converged"] == true);
}

TEST_CASE("json scenarios and infinite limits are accepted") {
    const fs::path d = temp_dir("json");
    const auto f = write(d / "s.json",
                         R"({"traffic": {"deadline": "inf", "buffer_eta": ".inf"},
                             "nodes": [{"id": "U", "role": "uav-main", "pos": [50, 50, 30]},
                                       {"id": "S", "role": "source", "pos": [40, 45, 0], "target": "U",
                                        "fading": "rician", "beta": 0}]})");
    const Run r = cli({"evaluate", "--scenario", f.string(), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto rows = nlohmann::json::parse(r.out);
    REQUIRE(rows["nodes"].size() == 1);
    CHECK(rows["nodes"][0]["p_dly"].get<double>() == 0.0);
    CHECK(rows["nodes"][0]["p_ov"].get<double>() == 0.0);
}

TEST_CASE("sweep and simulate write their tables") {
    const fs::path d = temp_dir("sweep");
    REQUIRE(cli({"sweep", "--scenario", scenario("desk3.yaml"), "--param", "gamma_th", "--values", "5,10",
                 "--out", d.string()})
                .code == 0);
    const std::string sweep = slurp(d / "sweep.csv");
    CHECK(first_line(sweep) ==
          "param,value,algo,converged,iterations,beta_rice,beta_ray,beta_source,r_source,r_mean");
    CHECK(count_lines(sweep) == 3);
    CHECK(cli({"sweep", "--scenario", scenario("desk3.yaml"), "--param", "colour", "--values", "1"}).code == 2);

    REQUIRE(cli({"simulate", "--scenario", scenario("desk3.yaml"), "--slots", "20000", "--warmup", "500", "--out",
                 d.string()})
                .code == 0);
    CHECK(first_line(slurp(d / "comparison.csv")) == "node,component,analytic,empirical,ci_half_width,rel_error,within_3ci");
    const auto report = nlohmann::json::parse(slurp(d / "simreport.json"));
    CHECK(report.contains("nodes"));
}
