#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "catch_amalgamated.hpp"
#include "composite/commands.hpp"

using namespace composite;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("composite_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(COMPOSITE_CODER_PATH) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("grid parsing", "[cli]") {
    const auto g = parse_grid("0:1:5", "g");
    REQUIRE(g.size() == 5);
    CHECK(g[2] == 0.5);
    CHECK(g.back() == 1.0);
    CHECK(parse_grid("0.1,0.2", "g") == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_AS(parse_grid("", "g"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1", "g"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1:2.5", "g"), ConfigError);
    CHECK_THROWS_AS(parse_grid("a,b", "g"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1,,2", "g"), ConfigError);
}

TEST_CASE("CSV and JSON serialization", "[cli]") {
    FigureTable t;
    t.columns = {"name", "x", "flag", "blank"};
    t.add_row({std::string("a,\"b\""), 1.0 / 3.0, true, std::monostate{}});
    t.add_row({std::string("plain"), 1e-20, false, 2.0});
    CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
    std::ostringstream csv;
    write_csv(csv, t);
    CHECK(csv.str() == "name,x,flag,blank\r\n\"a,\"\"b\"\"\",0.333333333333,true,\r\nplain,1e-20,false,2\r\n");
    const auto j = to_json(t);
    CHECK(j["columns"].size() == 4);
    CHECK(j["rows"][0][1].get<double>() == 0.333333333333);
    CHECK(j["rows"][0][3].is_null());
    CHECK(j["rows"][0][2].get<bool>());
    CHECK(j.contains("metadata"));
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("gaussian-compare table", "[cli]") {
    RunConfig cfg;
    cfg.power = {0.5, 1.0};
    const auto t = cmd_gaussian_compare(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK_THAT(std::get<double>(t.rows[1][1]), WithinAbs(0.5963, 1e-4));
    for (const auto& r : t.rows) {
        CHECK(std::get<double>(r[1]) < std::get<double>(r[3]));
        CHECK(std::get<double>(r[3]) < std::get<double>(r[2]));
    }
    CHECK(t.metadata["version"] == std::string(kVersion));
    cfg.power = {1.0};
    CHECK_THROWS_AS(cmd_gaussian_compare(cfg), ConfigError);
}

TEST_CASE("bss tables", "[cli]") {
    RunConfig cfg;
    cfg.grid = 51;
    const auto region = cmd_bss_region(cfg);
    std::size_t sys_rows = 0;
    for (const auto& r : region.rows) {
        const auto& name = std::get<std::string>(r[0]);
        if (name == "systematic_good" || name == "systematic_bad") {
            ++sys_rows;
            CHECK_FALSE(std::get<bool>(r[5]));
        }
        if (name == "shannon" || name == "outage") CHECK(std::get<bool>(r[5]));
    }
    CHECK(sys_rows == 2);

    cfg.p_grid = linspace(0.0, 1.0, 101);
    const auto fr = cmd_bss_frontier(cfg);
    REQUIRE(fr.metadata["crossovers"].size() == 3);
    CHECK_THAT(fr.metadata["crossovers"][0]["p"].get<double>(), WithinAbs(0.378, 0.005));
    cfg.p_grid = {0.5};
    CHECK_THROWS_AS(cmd_bss_frontier(cfg), ConfigError);

    const auto iface = cmd_bss_interface(cfg);
    CHECK(iface.metadata["parameters"]["p"] == "0.7");
    CHECK(iface.metadata.contains("staircases"));
    cfg.alpha1 = 0.6;
    CHECK_THROWS_AS(cmd_bss_region(cfg), ConfigError);
}

TEST_CASE("monte carlo table", "[cli]") {
    RunConfig cfg;
    const auto t = cmd_mc(cfg, McExperiment::UncodedBsc);
    REQUIRE(t.rows.size() == 2);
    for (const auto& r : t.rows) CHECK(std::get<std::string>(r[7]) == "pass");
    cfg.rate = {0.5};
    const auto q = cmd_mc(cfg, McExperiment::Quantizer);
    for (const auto& r : q.rows) CHECK(std::get<double>(r[4]) > 0.1100);
    cfg.blocklength = {1000};
    CHECK_THROWS_AS(cmd_mc(cfg, McExperiment::Quantizer), BudgetError);
    CHECK_THROWS_AS(parse_experiment("nope"), ConfigError);
}

TEST_CASE("selfcheck and its mutation hook", "[cli]") {
    RunConfig cfg;
    const auto ok = cmd_selfcheck(cfg);
    CHECK(ok.ok);
    CHECK(ok.table.rows.size() >= 10);
    cfg.perturb = 1e-4;
    CHECK_FALSE(cmd_selfcheck(cfg).ok);
}

TEST_CASE("CLI exit codes", "[cli][process]") {
    CHECK(run("selfcheck") == 0);
    CHECK(run("selfcheck --perturb 1e-3") == 1);
    CHECK(run("gaussian-compare --power ''") == 2);
    CHECK(run("gaussian-compare --alpha1 0.2") == 2);
    CHECK(run("bss-region --alpha1 0.7") == 2);
    CHECK(run("bss-frontier --p-grid 0.5") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("mc nope") == 2);
    CHECK(run("mc quantizer --blocklength 1000 --rate 0.5") == 4);
    CHECK(run("mc uncoded-bsc --trials 20") == 0);
}

TEST_CASE("CLI output is byte-identical across runs", "[cli][process]") {
    const auto dir = scratch();
    for (std::string fmt : {"csv", "json"}) {
        const auto a = dir / ("a." + fmt), b = dir / ("b." + fmt);
        REQUIRE(run("bss-frontier --grid 41 --format " + fmt + " --out " + a.string()) == 0);
        REQUIRE(run("bss-frontier --grid 41 --format " + fmt + " --out " + b.string()) == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK_FALSE(slurp(a).empty());
    }
    CHECK(slurp(dir / "a.csv.meta.json") == slurp(dir / "b.csv.meta.json"));
}

TEST_CASE("config file values yield to flags", "[cli][process]") {
    const auto dir = scratch();
    {
        std::ofstream f(dir / "run.cfg");
        f << "alpha1 = 0.2\ngrid = 11\np-grid = \"0:1:3\"\n";
    }
    REQUIRE(run("bss-frontier --config " + (dir / "run.cfg").string() + " --alpha1 0.22 --format json --out " +
                (dir / "c.json").string()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "c.json"));
    CHECK(j["metadata"]["parameters"]["alpha1"] == "0.22");
    CHECK(j["metadata"]["parameters"]["grid"] == 11);
    CHECK(j["rows"].size() == 3);
    fs::remove_all(dir);
}
