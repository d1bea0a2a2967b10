// SPDX-License-Identifier: Apache-2.0
//
// irsim: link-level simulator for IRS-assisted multi-user MISO downlink
// Copyright (C) 2026 The irsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "irsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace irsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

struct TempDir
{
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("irsim_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

struct CliRun
{
    int code;
    std::string out, err;
};

CliRun cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "irsim");
    std::vector<char *> argv;
    for (std::string &a : args)
        argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void spit(const std::string &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("format_number")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-11) == "1e-11");
    CHECK(format_number(5.0) == "5");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(format_number(54.37450292123) == "54.37450292");
}

TEST_CASE("to_csv - header and rows")
{
    Table t;
    t.header = {"a", "b"};
    t.rows = {{1.0, 0.25}, {2.0, 1e-3}};
    CHECK(to_csv(t) == "a,b\n1,0.25\n2,0.001\n");
}

TEST_CASE("default_run_options")
{
    const RunOptions du = default_run_options("sweep-du");
    CHECK(du.grid.size() == 24);
    CHECK(du.grid.front() == 5.0);
    CHECK(du.grid.back() == 120.0);
    CHECK(du.scenario.k_users == 1);
    CHECK(du.scenario.m_bs == 4);
    CHECK(du.scenario.n_irs == 35);

    const RunOptions tc = default_run_options("sweep-tauc");
    CHECK(tc.grid.size() == 16);
    CHECK(tc.grid.back() == tc.scenario.coherence_s);
    CHECK(tc.scenario.k_users == 8);
    REQUIRE(tc.systems.size() == 2);
    CHECK(tc.systems[0].m_bs == 12);
    CHECK(tc.systems[0].n_irs == 54);
    CHECK(tc.systems[1].m_bs == 15);
    CHECK(tc.systems[1].n_irs == 23);
    CHECK(tc.baseline_m_bs == 20);

    const RunOptions n = default_run_options("sweep-n");
    CHECK(n.grid == std::vector<double>{4, 8, 16, 32, 64});
    CHECK(n.m_values == std::vector<int>{12, 15, 20});

    CHECK_THROWS_AS(default_run_options("sweep-x"), ConfigError);
}

TEST_CASE("resolve_run_options - precedence flags > config > defaults")
{
    const json cfg = json::parse(R"({
        "scenario": {"m_bs": 6, "total_power_w": 2.0},
        "channel_model": {"rho_bs": 0.3},
        "optimizer": {"max_outer": 17},
        "run": {"seed": 99, "trials": 7, "csi": "perfect"}
    })");
    CliOverrides flags;
    flags.trials = 3;
    const RunOptions o = resolve_run_options("sweep-du", &cfg, flags);
    CHECK(o.scenario.m_bs == 6);
    CHECK(o.scenario.total_power_w == 2.0);
    CHECK(o.scenario.n_irs == 35);
    CHECK(o.model.correlation.rho_bs == 0.3);
    CHECK(o.model.correlation.rho_irs == 0.7);
    CHECK(o.model.pga.max_outer == 17);
    CHECK(o.seed == 99);
    CHECK(o.trials == 3);
    CHECK(o.csi == CsiSelection::Perfect);
}

TEST_CASE("resolve_run_options - seeds are kept verbatim")
{
    CliOverrides flags;
    flags.seed = 18446744073709551615ull;
    CHECK(resolve_run_options("sweep-du", nullptr, flags).seed == 18446744073709551615ull);
}

TEST_CASE("resolve_run_options - strict config")
{
    CliOverrides none;
    for (const char *text : {R"({"scenaro": {}})", R"({"scenario": {"m_bs": 4, "colour": 1}})",
                             R"({"optimizer": {"step": 1}})", R"({"channel_model": {"rho": 0.1}})",
                             R"({"sweep": {"grid": [1], "extra": true}})", R"({"run": {"seeds": 1}})",
                             R"({"run": {"trials": "many"}})", R"({"run": {"csi": "partial"}})",
                             R"({"scenario": {"m_bs": 0}})", R"({"run": {"trials": 0}})",
                             R"({"sweep": {"grid": []}})", R"({"optimizer": {"direction": "steepest"}})",
                             R"({"optimizer": {"direction": 1}})"})
    {
        const json cfg = json::parse(text);
        INFO(text);
        CHECK_THROWS_AS(resolve_run_options("sweep-du", &cfg, none), ConfigError);
    }
}

TEST_CASE("resolve_run_options - user count follows k_users")
{
    const json cfg = json::parse(R"({"scenario": {"k_users": 3}})");
    const RunOptions o = resolve_run_options("sweep-n", &cfg, {});
    CHECK(o.scenario.k_users == 3);
    CHECK(o.scenario.user_pos.size() == 3);
}

TEST_CASE("config document round trip")
{
    const RunOptions a = default_run_options("sweep-tauc");
    const json doc = to_config_json(a);
    const RunOptions b = resolve_run_options("sweep-tauc", &doc, {});
    CHECK(to_config_json(b) == doc);
    CHECK(doc["optimizer"]["direction"] == "envelope");

    const json soft = json::parse(R"({"optimizer": {"direction": "softmin"}})");
    const RunOptions c = resolve_run_options("sweep-n", &soft, {});
    CHECK(c.model.pga.direction == PgaDirection::SoftMin);
    CHECK(to_config_json(c)["optimizer"]["direction"] == "softmin");
}

TEST_CASE("sweep-du - end to end")
{
    TempDir dir;
    const std::string out = dir.file("du.csv");
    const CliRun r = cli({"sweep-du", "--trials", "100", "--out", out, "--threads", "1"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 25);
    CHECK(rows[0] == std::vector<std::string>{"du_m", "snr_db_irs_perfect", "snr_db_irs_estimated",
                                              "snr_db_noirs_perfect", "snr_db_noirs_estimated",
                                              "snr_db_irs_n70_perfect", "snr_db_irs_n70_estimated"});
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const double du = std::stod(rows[i][0]);
        CHECK(du == 5.0 * static_cast<double>(i));
        if (du > 30.0)
            CHECK(std::stod(rows[i][1]) > std::stod(rows[i][3]));
        if (du > 10.0)
            CHECK(std::stod(rows[i][3]) < std::stod(rows[i - 1][3]));
    }

    const json manifest = json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest["command"] == "sweep-du");
    CHECK(manifest["seed"] == 1);
    CHECK(manifest["trials"] == 100);
    CHECK(manifest["output_path"] == out);
    CHECK(manifest["version"] == kVersion);
    CHECK(manifest["wall_clock_s"].get<double>() >= 0.0);
    CHECK(manifest["config_path"].is_null());
}

TEST_CASE("sweeps - byte-identical reruns")
{
    TempDir dir;
    const std::string a = dir.file("a.csv"), b = dir.file("b.csv"), c = dir.file("c.csv");
    REQUIRE(cli({"sweep-du", "--trials", "20", "--seed", "42", "--out", a, "--threads", "1"}).code == 0);
    REQUIRE(cli({"sweep-du", "--trials", "20", "--seed", "42", "--out", b, "--threads", "3"}).code == 0);
    CHECK(slurp(a) == slurp(b));

    // The manifest's resolved config reproduces the run.
    const json manifest = json::parse(slurp(a + ".manifest.json"));
    const std::string cfg = dir.file("cfg.json");
    spit(cfg, manifest["resolved_config"].dump());
    REQUIRE(cli({"sweep-du", "--config", cfg, "--out", c}).code == 0);
    CHECK(slurp(a) == slurp(c));

    REQUIRE(cli({"sweep-du", "--trials", "20", "--seed", "43", "--out", c}).code == 0);
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("sweep-tauc and sweep-n - small runs")
{
    TempDir dir;
    const std::string cfg = dir.file("cfg.json");
    spit(cfg, R"({
        "scenario": {"k_users": 2},
        "optimizer": {"max_outer": 10},
        "sweep": {"grid": [1e-6, 1e-4, 1e-2], "systems": [{"m_bs": 4, "n_irs": 6}], "baseline_m_bs": 5},
        "run": {"trials": 2}
    })");
    const std::string out = dir.file("tc.csv");
    REQUIRE(cli({"sweep-tauc", "--config", cfg, "--out", out, "--csi", "both"}).code == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"tau_c_s", "net_min_rate_irs_m4_n6_perfect",
                                              "net_min_rate_irs_m4_n6_estimated", "net_min_rate_noirs_m5_perfect",
                                              "net_min_rate_noirs_m5_estimated"});
    for (std::size_t c = 1; c < rows[3].size(); ++c)
        CHECK(std::stod(rows[3][c]) == 0.0);

    const std::string cfg_n = dir.file("cfg_n.json");
    spit(cfg_n, R"({
        "scenario": {"k_users": 2},
        "optimizer": {"max_outer": 10},
        "sweep": {"grid": [2, 4], "m_values": [3], "baseline_m_bs": 4},
        "run": {"trials": 2, "csi": "estimated"}
    })");
    const std::string out_n = dir.file("n.csv"), trace = dir.file("trace.csv");
    REQUIRE(cli({"sweep-n", "--config", cfg_n, "--out", out_n, "--trace", trace}).code == 0);
    const auto rows_n = parse_csv(slurp(out_n));
    REQUIRE(rows_n.size() == 3);
    CHECK(rows_n[0] == std::vector<std::string>{"n_irs", "min_rate_irs_m3_estimated", "min_rate_noirs_m4_estimated"});
    const auto rows_t = parse_csv(slurp(trace));
    REQUIRE(rows_t.size() >= 3);
    CHECK(rows_t[0] == std::vector<std::string>{"n_irs", "iteration", "min_rate"});
    CHECK(fs::exists(trace + ".manifest.json"));
}

TEST_CASE("validate - exit codes")
{
    TempDir dir;
    const CliRun ok = cli({"validate", "--out", dir.file("v.csv")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(dir.file("v.csv.manifest.json")));
    const auto rows = parse_csv(slurp(dir.file("v.csv")));
    CHECK(rows[0] == std::vector<std::string>{"suite", "metric", "value", "threshold", "relation", "pass"});

    const CliRun fault = cli({"validate", "--inject-gradient-fault", "0.1", "--out", dir.file("f.csv")});
    CHECK(fault.code == 1);
    CHECK(fault.out.find("FAIL gradient") != std::string::npos);

    const CliRun zero = cli({"validate", "--mmse-noise", "0", "--out", dir.file("z.csv")});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("empirical mse") != std::string::npos);
}

TEST_CASE("cli - usage errors")
{
    TempDir dir;
    CHECK(cli({}).code != 0);
    CHECK(cli({"sweep-x"}).code != 0);
    CHECK(cli({"sweep-du", "--csi", "half"}).code != 0);

    const CliRun missing = cli({"sweep-du", "--config", dir.file("nope.json"), "--out", dir.file("o.csv")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);

    spit(dir.file("bad.json"), R"({"scenario": {"m_bs": -1}})");
    const CliRun bad = cli({"sweep-du", "--config", dir.file("bad.json"), "--out", dir.file("o.csv")});
    CHECK(bad.code == 2);
    CHECK(!bad.err.empty());

    CHECK(cli({"sweep-du", "--trials", "0", "--out", dir.file("o.csv")}).code == 2);
}
