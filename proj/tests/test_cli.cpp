// SPDX-License-Identifier: Apache-2.0
//
// mmimo-sg: stochastic-geometry uplink massive MIMO SINR toolkit
// Copyright (C) 2026 The mmimo-sg Authors
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

#include "catch_amalgamated.hpp"
#include "mmimo/cli.hpp"
#include "mmimo/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mmimo;

namespace
{

struct Run
{
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "mmimo");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_temp(const std::string &name, const std::string &text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST_CASE("RunConfig - Defaults")
{
    const RunConfig c;
    CHECK(c.M == 64);
    CHECK(c.K == 10);
    CHECK(c.alpha == 4.0);
    CHECK(c.epsilon == 0.0);
    CHECK(c.isd_m == 500.0);
    CHECK(c.P_t_dbm == 23.0);
    CHECK(c.N_terms == 5);
    CHECK(c.iterations == 10000);
    CHECK(c.T_max_db == 21.0);
    CHECK(c.T_c_symbols == 200.0);
    CHECK(c.noise.kind == NoiseSpec::Kind::thermal);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config_text - Rejects bad values with the key path")
{
    CHECK_THROWS_WITH(parse_config_text(R"({"alpha": 2})"), Catch::Matchers::ContainsSubstring("alpha"));
    CHECK_THROWS_AS(parse_config_text(R"({"alpha": 2})"), ConfigError);
    CHECK_THROWS_WITH(parse_config_text(R"({"thresholds_db": {"stepp": 1}})"),
                      Catch::Matchers::ContainsSubstring("thresholds_db.stepp"));
    CHECK_THROWS_AS(parse_config_text(R"({"M": "many"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"epsilon": 1.5})"), ConfigError);
}

TEST_CASE("parse_config_text - Reads overrides")
{
    const auto c = parse_config_text(R"({"M": 128, "K": 20, "epsilon": 0.5, "noise": "off", "layout": "hex"})");
    CHECK(c.M == 128);
    CHECK(c.K == 20);
    CHECK(c.epsilon == 0.5);
    CHECK(c.noise.kind == NoiseSpec::Kind::off);
    CHECK(c.noise.sigma2_w() == 0.0);
}

TEST_CASE("emit_config - Round trip keeps the digest")
{
    RunConfig c;
    c.M = 96;
    c.epsilon = 0.25;
    c.noise.kind = NoiseSpec::Kind::dbm;
    c.noise.sigma2_dbm = -100.0;
    const auto back = parse_config_text(emit_config(c));
    CHECK(config_digest(back) == config_digest(c));
    CHECK(config_digest(c).size() == 16);
    RunConfig d = c;
    d.M = 97;
    CHECK(config_digest(d) != config_digest(c));
}

TEST_CASE("parse_values - Range and list")
{
    const auto r = cli::parse_values("0:1:0.25");
    REQUIRE(r.size() == 5);
    CHECK(std::abs(r.back() - 1.0) < 1e-12);
    CHECK(cli::parse_values("1,4,8") == std::vector<double>{1.0, 4.0, 8.0});
    CHECK_THROWS(cli::parse_values("1:0:1"));
    CHECK_THROWS(cli::parse_values("a,b"));
}

TEST_CASE("dispatch - Analytic curve")
{
    const auto cfg = write_temp("mmimo_cli_low.json", R"({"thresholds_db": {"min": -80, "max": -60, "step": 10}, "noise": "off"})");
    const auto r = run({"analytic", "--config", cfg, "--receiver", "mrc"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    const auto curve = read_curve_csv(is, CurveSource::analytic);
    REQUIRE(curve.size() == 3);
    CHECK(curve.thresholds_db.front() == -80.0);
    CHECK(curve.probabilities.front() >= 0.99);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve.probabilities[i] <= curve.probabilities[i - 1] + 1e-12);
}

TEST_CASE("dispatch - Scaling for ZF warns below three antennas per user")
{
    const auto r = run({"scaling", "--receiver", "zf", "--match-mrc", "64", "--k", "5"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["M_zf"] == 12);
    CHECK(j["M_zf_scaled"] == 13);
    CHECK(j["valid"] == false);
    CHECK(r.err.find("warning") != std::string::npos);

    const auto m = json::parse(run({"scaling", "--receiver", "mrc", "--k-new", "20"}).out);
    CHECK(m["M_new"] == 259);
}

TEST_CASE("dispatch - Rate report")
{
    const auto r = run({"rate", "--receiver", "mrc", "--noise-off"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(std::abs(j["psi"].get<double>() - 0.05) < 1e-12);
    const double tau0 = j["tau0"].get<double>();
    CHECK(tau0 > 0.0);
    CHECK(std::abs(j["tau0_bar"].get<double>() - 0.95 * tau0) < 1e-12);
    CHECK(std::abs(j["tau_cell"].get<double>() - 9.5 * tau0) < 1e-9);
}

TEST_CASE("dispatch - Sweep CSV")
{
    const auto r = run({"sweep", "--param", "epsilon", "--values", "0,1", "--noise-off"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("epsilon,tau0,tau0_bar,tau_cell\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("dispatch - Errors exit nonzero")
{
    const auto bad_alpha = run({"analytic", "--alpha", "2"});
    CHECK(bad_alpha.code != 0);
    CHECK(bad_alpha.err.find("alpha") != std::string::npos);
    CHECK(run({"analytic", "--config", "/nonexistent/config.json"}).code != 0);
    CHECK(run({"analytic", "--receiver", "mmse"}).code != 0);
    CHECK(run({"nosuchcommand"}).code != 0);
    const auto zf_small = run({"analytic", "--receiver", "zf", "--M", "5"});
    CHECK(zf_small.code != 0);
}

TEST_CASE("dispatch - Executable exit codes")
{
    const char *exe = std::getenv("MMIMO_CLI");
    if (!exe)
        SKIP("MMIMO_CLI not set");
    const std::string base = std::string("\"") + exe + "\"";
    CHECK(std::system((base + " scaling --receiver mrc > /dev/null").c_str()) == 0);
    CHECK(std::system((base + " analytic --alpha 2 > /dev/null 2>&1").c_str()) != 0);
}
