// Copyright 2026 The Telesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "telesim/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

using namespace telesim;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = parse_and_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        unsetenv("TELESIM_SEED");
        dir_ = fs::temp_directory_path() /
               ("telesim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override {
        unsetenv("TELESIM_SEED");
        fs::remove_all(dir_);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, TeleportReportHasTheDocumentedKeys) {
    const auto r = run({"teleport", "--setting", "plus45", "--mode", "exact"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"fidelity", "efficiency", "crosstalk_rejection", "visibility",
                            "beats_classical", "bell_violating", "threefold_prob", "seed"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_DOUBLE_EQ(j["fidelity"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(j["efficiency"].get<double>(), 0.25);
    EXPECT_EQ(j["crosstalk_rejection"].get<double>(), 1.0);
    EXPECT_TRUE(j["beats_classical"].get<bool>());
}

TEST_F(CliTest, SwapFringeTableAndVisibility) {
    const auto csv = run({"swap", "--overlap", "1.0", "--mode", "exact", "--theta-steps", "16",
                          "--format", "csv"});
    ASSERT_EQ(csv.code, kExitOk) << csv.err;
    std::istringstream lines(csv.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "theta,rate_plus,rate_minus");
    int rows = 0;
    for (std::string l; std::getline(lines, l);) {
        ++rows;
        EXPECT_EQ(std::count(l.begin(), l.end(), ','), 2);
    }
    EXPECT_EQ(rows, 16);

    const auto js = run({"swap", "--overlap", "1.0", "--mode", "exact", "--theta-steps", "16"});
    ASSERT_EQ(js.code, kExitOk);
    EXPECT_NEAR(nlohmann::json::parse(js.out)["visibility"].get<double>(), 1.0, 1e-9);
}

TEST_F(CliTest, CalibratedSwapReportsFidelityNearPointEightTwo) {
    const auto r = run({"swap", "--calibrate-visibility", "0.65"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["fidelity"].get<double>(), 0.825, 0.01);
    EXPECT_FALSE(j["bell_violating"].get<bool>());
    EXPECT_TRUE(j["calibration"]["converged"].get<bool>());

    const auto c = run({"calibrate", "--calibrate-fidelity", "0.8"});
    ASSERT_EQ(c.code, kExitOk) << c.err;
    EXPECT_NEAR(nlohmann::json::parse(c.out)["fidelity"].get<double>(), 0.80, 1e-3);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run({"teleport", "--no-such-flag"}).code, kExitUsage);
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"dance"}).code, kExitUsage);
    const auto r = run({"teleport", "--no-such-flag"});
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, InvalidValuesExitThreeAndNameTheConstraint) {
    auto r = run({"teleport", "--overlap", "1.5"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("overlap must lie in [0, 1]"), std::string::npos);

    r = run({"teleport", "--trials", "many"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("trials"), std::string::npos);

    EXPECT_EQ(run({"teleport", "--chi", "0.5"}).code, kExitConfig);
    EXPECT_EQ(run({"teleport", "--mode", "quantum"}).code, kExitConfig);
    EXPECT_EQ(run({"teleport", "--format", "csv"}).code, kExitConfig);
    EXPECT_EQ(run({"teleport", "--calibrate-visibility", "0.6"}).code, kExitConfig);
    EXPECT_EQ(run({"calibrate"}).code, kExitConfig);
    EXPECT_EQ(run({"baseline-random", "--mode", "mc"}).code, kExitConfig);
    EXPECT_EQ(run({"swap", "--theta-steps", "2"}).code, kExitConfig);

    std::ofstream(path("bad.cfg")) << "overlap = 0.5\nwavelength = 788\n";
    r = run({"teleport", "--config", path("bad.cfg")});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("wavelength"), std::string::npos);
    EXPECT_EQ(run({"teleport", "--config", path("missing.cfg")}).code, kExitConfig);
}

TEST_F(CliTest, UnwritablePathExitsFourWithoutPartialFiles) {
    const auto r = run({"teleport", "--out", path("no/such/dir/report.json")});
    EXPECT_EQ(r.code, kExitOutput);
    EXPECT_EQ(run({"teleport", "--out", dir_.string()}).code, kExitOutput);

    ASSERT_EQ(run({"teleport", "--out", path("report.json")}).code, kExitOk);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        ++files;
        EXPECT_EQ(e.path().filename(), "report.json");
    }
    EXPECT_EQ(files, 1);
}

TEST_F(CliTest, MonteCarloOutputIsByteStable) {
    const std::vector<std::string> base{"teleport", "--mode", "mc", "--trials", "50000",
                                        "--seed", "77", "--overlap", "0.75", "--out"};
    auto a = base;
    a.push_back(path("a.json"));
    auto b = base;
    b.push_back(path("b.json"));
    ASSERT_EQ(run(a).code, kExitOk);
    ASSERT_EQ(run(b).code, kExitOk);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

    auto threaded = base;
    threaded.insert(threaded.end(), {path("c.json"), "--threads", "3"});
    ASSERT_EQ(run(threaded).code, kExitOk);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("c.json")));

    const auto j = nlohmann::json::parse(slurp(path("a.json")));
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 77u);
    EXPECT_EQ(j["mode"].get<std::string>(), "mc");
    EXPECT_EQ(run({"swap", "--mode", "montecarlo", "--trials", "2000", "--theta-steps", "4"}).code,
              kExitOk);
}

TEST_F(CliTest, NumbersCarryTwelveSignificantDigits) {
    const auto j = nlohmann::json::parse(run({"teleport", "--overlap", "0.3"}).out);
    const double f = j["fidelity"].get<double>();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", 1.0 / 1.7);
    EXPECT_EQ(f, std::strtod(buf, nullptr));
}

TEST_F(CliTest, SeedPrecedenceFlagThenConfigThenEnvironment) {
    auto seed_of = [](const CliRun& r) { return nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>(); };
    EXPECT_EQ(seed_of(run({"baseline-classical", "--samples", "10"})), RunConfig{}.seed);

    setenv("TELESIM_SEED", "555", 1);
    EXPECT_EQ(seed_of(run({"baseline-classical", "--samples", "10"})), 555u);

    std::ofstream(path("s.cfg")) << "seed = 666\n";
    EXPECT_EQ(seed_of(run({"baseline-classical", "--samples", "10", "--config", path("s.cfg")})), 666u);
    EXPECT_EQ(seed_of(run({"baseline-classical", "--samples", "10", "--config", path("s.cfg"),
                           "--seed", "777"})),
              777u);

    setenv("TELESIM_SEED", "not-a-number", 1);
    EXPECT_EQ(run({"baseline-classical"}).code, kExitConfig);
}

TEST_F(CliTest, DumpConfigRoundTrips) {
    const auto first = run({"swap", "--overlap", "0.7879", "--chi-return", "0.013", "--dark", "1e-3",
                            "--calibrate-visibility", "0.65", "--threads", "2", "--dump-config"});
    ASSERT_EQ(first.code, kExitOk) << first.err;
    std::ofstream(path("dump.cfg")) << first.out;
    const auto second = run({"swap", "--config", path("dump.cfg"), "--dump-config"});
    EXPECT_EQ(second.out, first.out);

    RunConfig parsed;
    apply_config_text(parsed, first.out);
    EXPECT_DOUBLE_EQ(parsed.overlap, 0.7879);
    EXPECT_EQ(parsed.calibrate_visibility, 0.65);
}

TEST(RunConfigText, DumpParseIsIdentityForRandomConfigs) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        RunConfig c;
        c.experiment = i % 2 ? "swap" : "teleport";
        c.mode = i % 3 ? "exact" : "mc";
        c.trials = rng() % 10000000;
        c.seed = rng();
        c.overlap = u(rng);
        c.chi_forward = 0.2 * u(rng);
        c.chi_return = 0.2 * u(rng);
        c.efficiency = u(rng);
        c.dark = 0.1 * u(rng);
        c.bloch_theta = 3 * u(rng);
        c.bloch_phi = 6 * u(rng) - 3;
        c.theta_steps = 4 + static_cast<int>(rng() % 60);
        if (i % 4 == 0) c.calibrate_visibility = u(rng);
        if (i % 4 == 1) c.calibrate_fidelity = 0.5 + 0.5 * u(rng);
        c.samples = 1 + static_cast<std::int64_t>(rng() % 1000);
        c.threads = static_cast<unsigned>(rng() % 8);
        c.conditional = i % 5 != 0;
        if (i % 6 == 0) c.out = "/tmp/x y.json";
        c.format = i % 7 ? "json" : "csv";

        RunConfig back;
        apply_config_text(back, dump_config(c));
        EXPECT_EQ(back, c) << dump_config(c);
    }
}

TEST(RunConfigText, CommentsBlankLinesAndChiShortcut) {
    RunConfig c;
    apply_config_text(c, "# comment\n\n  chi = 0.05   # both\nsetting=R\n");
    EXPECT_EQ(c.chi_forward, 0.05);
    EXPECT_EQ(c.chi_return, 0.05);
    EXPECT_EQ(c.setting, "R");
    EXPECT_THROW(apply_config_text(c, "overlap 0.5\n"), ConfigError);
    EXPECT_THROW(apply_config_text(c, "conditional = maybe\n"), ConfigError);
}
