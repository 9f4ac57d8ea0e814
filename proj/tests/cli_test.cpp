// Copyright 2026 The dpbandits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dpbandits/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dpbandits/errors.hpp"
#include "dpbandits/io.hpp"

namespace dpbandits::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dpbandits_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string str(const ManifestValue& v) { return std::get<std::string>(v); }

TEST_CASE("list-settings") {
  const Result r = invoke({"list-settings"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("setting 1: 0.75, 0.70, 0.70, 0.70, 0.70") != std::string::npos);
  CHECK(r.out.find("setting 2: 0.75, 0.625, 0.50, 0.375, 0.25") != std::string::npos);
  CHECK(r.out.find("setting 3: 0.75, 0.15, 0.15, 0.15, 0.15") != std::string::npos);
  CHECK(r.out.find("setting 4") == std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(invoke({}).code == kExitConfig);
  CHECK(invoke({"run", "--bogus"}).code == kExitConfig);
  CHECK(invoke({"frobnicate"}).code == kExitConfig);
  CHECK(invoke({"run", "--means", "0.5,abc", "--horizon", "10"}).code == kExitConfig);
  CHECK(invoke({"run", "--means", "0.5,1.5", "--horizon", "10"}).code == kExitConfig);
  CHECK(invoke({"run", "--means", "0.5,0.4", "--eps", "-1", "--horizon", "10"}).code ==
        kExitConfig);
  CHECK(invoke({"run", "--setting", "4"}).code == kExitConfig);
  CHECK(invoke({"run", "--setting", "1", "--means", "0.5,0.4"}).code == kExitConfig);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("dp-se without a horizon is a config error") {
  const fs::path out = fresh("dpse");
  const Result r = invoke({"run", "--setting", "1", "--algos", "dp-se", "--reps", "1",
                           "--out", out.string()});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("horizon") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "traces.csv"));
}

TEST_CASE("run writes traces, summary, plots and manifest") {
  for (int setting : {2, 3}) {
    const fs::path out = fresh("run" + std::to_string(setting));
    const Result r = invoke({"run", "--setting", std::to_string(setting), "--algos",
                             "alucb,hybrid,dp-se", "--eps", "0.5,8", "--horizon", "2000",
                             "--reps", "2", "--seed", "5", "--out", out.string(),
                             "--workers", "2"});
    REQUIRE(r.code == kExitOk);
    for (const char* f : {"traces.csv", "summary.csv", "config.json", "regret_eps0.5.svg",
                          "regret_eps8.svg", "final_regret.svg"}) {
      CHECK(fs::exists(out / f));
    }
    const Manifest m = read_manifest(out / "config.json");
    CHECK(str(m.at("means")) == (setting == 2 ? "0.75,0.625,0.5,0.375,0.25"
                                              : "0.75,0.15,0.15,0.15,0.15"));
    CHECK(std::get<std::int64_t>(m.at("horizon")) == 2000);
    CHECK(str(m.at("seed")) == "5");
    CHECK(read_trace_rows(out / "traces.csv").size() == 3 * 2 * 2 * 12);
  }
}

TEST_CASE("manifest is sufficient to rerun identically") {
  const fs::path a = fresh("rerun_a"), b = fresh("rerun_b");
  const std::vector<std::string> args{"run", "--means", "0.8,0.5,0.45", "--algos", "ucb1,ftnl",
                                      "--eps", "1", "--horizon", "500", "--reps", "3",
                                      "--checkpoints", "all", "--seed", "11"};
  auto with = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(invoke(with(a)).code == kExitOk);
  const Manifest m = read_manifest(a / "config.json");
  // Rebuild the command line from the manifest alone.
  REQUIRE(invoke({"run", "--means", str(m.at("means")), "--algos", str(m.at("algorithms")),
                  "--eps", str(m.at("epsilons")), "--horizon",
                  std::to_string(std::get<std::int64_t>(m.at("horizon"))), "--reps",
                  std::to_string(std::get<std::int64_t>(m.at("repetitions"))),
                  "--checkpoints", str(m.at("checkpoints")), "--seed", str(m.at("seed")),
                  "--out", b.string()})
              .code == kExitOk);
  CHECK(read_trace_rows(a / "traces.csv") == read_trace_rows(b / "traces.csv"));
  CHECK(read_trace_rows(a / "traces.csv").size() == 2 * 3 * 500);
}

TEST_CASE("DPBANDITS_SEED sets the default seed") {
  const fs::path out = fresh("envseed");
  ::setenv("DPBANDITS_SEED", "424242", 1);
  const Result r = invoke({"run", "--means", "0.6,0.4", "--algos", "ucb1", "--eps", "1",
                           "--reps", "1", "--horizon", "16", "--out", out.string()});
  ::unsetenv("DPBANDITS_SEED");
  REQUIRE(r.code == kExitOk);
  CHECK(str(read_manifest(out / "config.json").at("seed")) == "424242");
}

TEST_CASE("reproduce: figure ids and scaling") {
  CHECK(invoke({"reproduce", "--figure", "10"}).code == kExitConfig);
  CHECK(invoke({"reproduce", "--figure", "fig1"}).code == kExitConfig);
  CHECK(invoke({"reproduce"}).code == kExitConfig);
  CHECK(invoke({"reproduce", "--figure", "1", "--scale", "0.5"}).code == kExitConfig);

  const fs::path out = fresh("fig1");
  const Result r = invoke({"reproduce", "--figure", "1", "--scale", "64", "--reps", "1",
                           "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(out / "figure1.svg"));
  const Manifest m = read_manifest(out / "setting1" / "config.json");
  CHECK(std::get<std::int64_t>(m.at("horizon")) == 65536);
  CHECK(str(m.at("epsilons")) == "0.5");
  CHECK(str(m.at("means")) == "0.75,0.7,0.7,0.7,0.7");
  CHECK(str(m.at("algorithms")) == "anytime-lazy-ucb,hybrid-ucb,dp-se");
}

TEST_CASE("reproduce: figure 5 plots final regret over the full grid") {
  const fs::path out = fresh("fig5");
  REQUIRE(invoke({"reproduce", "--figure", "5", "--scale", "4096", "--reps", "2",
                  "--out", out.string()})
              .code == kExitOk);
  CHECK(fs::exists(out / "figure5.svg"));
  const Manifest m = read_manifest(out / "setting1" / "config.json");
  CHECK(str(m.at("epsilons")) == "0.1,0.25,0.5,1,8,64,128");
  CHECK(std::get<std::int64_t>(m.at("horizon")) == 1024);
}

TEST_CASE("reproduce: all") {
  const fs::path out = fresh("all");
  REQUIRE(invoke({"reproduce", "--figure", "all", "--scale", "8192", "--reps", "1",
                  "--out", out.string()})
              .code == kExitOk);
  int main_text = 0, appendix = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    const std::string n = e.path().filename().string();
    if (e.path().extension() != ".svg") continue;
    main_text += n.rfind("figure", 0) == 0;
    appendix += n.rfind("appendix", 0) == 0;
  }
  for (int i = 1; i <= 8; ++i) {
    CHECK(fs::exists(out / ("figure" + std::to_string(i) + ".svg")));
  }
  CHECK(main_text == 11);  // figures 1-8 plus three panels of figure 9
  CHECK(appendix == 13);   // setting 2: final + 4 eps; setting 3: final + 7 eps
  for (int s : {1, 2, 3}) {
    CHECK(fs::exists(out / ("setting" + std::to_string(s)) / "traces.csv"));
  }
}

TEST_CASE("parse_real_list") {
  CHECK(parse_real_list("0.1, 0.25,8") == std::vector<double>{0.1, 0.25, 8});
  CHECK_THROWS_AS(parse_real_list(""), ConfigError);
  CHECK_THROWS_AS(parse_real_list("1,,2"), ConfigError);
}

}  // namespace
}  // namespace dpbandits::cli
