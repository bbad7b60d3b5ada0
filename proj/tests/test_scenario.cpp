// Copyright 2026 The qwlift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <string>

#include <doctest.h>

#include "qwlift/error.hpp"
#include "qwlift/scenario.hpp"

using namespace qwlift;

namespace {

const std::filesystem::path kConfigDir =
    std::filesystem::path(QWLIFT_TEST_DATA_DIR) / "configs";

ScenarioOutcome run_text(const std::string& text, RunOptions opts = {}) {
  return run_scenario_text(text, opts);
}

ScenarioOutcome run_config(const std::string& name, RunOptions opts = {}) {
  return run_scenario_text(read_text(kConfigDir / name), opts, kConfigDir);
}

bool mentions(const ScenarioOutcome& out, const std::string& needle) {
  for (const auto& d : out.diagnostics)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("numbers in configs") {
  CHECK(parse_number("3") == 3.0);
  CHECK(parse_number(" 1/16 ") == 0.0625);
  CHECK(parse_number("-1e-3") == -0.001);
  CHECK_THROWS_AS(parse_number("1/0"), Error);
  CHECK_THROWS_AS(parse_number("eight"), Error);
  CHECK_THROWS_AS(parse_number(""), Error);
}

TEST_CASE("config syntax") {
  const Config c = Config::parse(
      "# comment\n"
      "a.b = 1/4   # trailing comment\n"
      "\n"
      "list = 5, 7 ,9\n"
      "flag = yes\n");
  CHECK(c.number("a.b") == 0.25);
  CHECK(c.numbers("list") == std::vector<double>{5, 7, 9});
  CHECK(c.flag_or("flag", false));
  CHECK(c.count_or("missing", 4) == 4);
  CHECK(c.unused().empty());
  CHECK_THROWS_AS(c.text("missing"), Error);
  CHECK_THROWS_AS(c.count("a.b"), Error);

  CHECK_THROWS_AS(Config::parse("no equals here\n"), Error);
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), Error);
  CHECK_THROWS_AS(Config::parse("bad key! = 1\n"), Error);
  CHECK_THROWS_AS(Config::parse(" = 1\n"), Error);
}

TEST_CASE("validation failures exit with code 1") {
  const ScenarioOutcome bad = run_config("malformed.conf");
  CHECK(bad.exit_code == kExitValidation);
  CHECK(bad.results.is_null());
  CHECK_FALSE(bad.diagnostics.empty());

  CHECK(run_text("scenario.kind = warp-drive\n").exit_code == kExitValidation);
  CHECK(run_text("cycle.n = 5\n").exit_code == kExitValidation);

  const ScenarioOutcome extra =
      run_text("scenario.kind = cycle-lmc\ncycle.n = 5\ncycle.colour = red\n");
  CHECK(extra.exit_code == kExitValidation);
  CHECK(mentions(extra, "cycle.colour"));

  CHECK(run_text("scenario.kind = cycle-lmc\ncycle.n = 1\n").exit_code ==
        kExitValidation);
  CHECK(run_text("scenario.kind = cycle-qw\ncycle.n = 5\ncycle.q = 2\n")
            .exit_code == kExitValidation);
  CHECK(run_text("scenario.kind = cycle-lmc\ncycle.n = 5\nmixing.epsilon = 0\n")
            .exit_code == kExitValidation);
  CHECK(run_text("scenario.kind = torus-lmc\ntorus.m = 1\ntorus.d = 1\n")
            .exit_code == kExitValidation);
  CHECK(run_text("scenario.kind = bridge-build\nprocess.kind = cycle-lmc\n"
                 "cycle.n = 5\nbridge.start = 9\n")
            .exit_code == kExitValidation);
}

TEST_CASE("every shipped config runs") {
  struct Case {
    const char* file;
    int exit_code;
  };
  const Case cases[] = {
      {"cycle_qw.conf", kExitOk},         {"cycle_lmc.conf", kExitOk},
      {"classical_walk.conf", kExitOk},   {"torus_lmc.conf", kExitOk},
      {"bridge_build.conf", kExitOk},     {"lift_build.conf", kExitOk},
      {"lift_build_odd.conf", kExitOk},   {"conductance.conf", kExitOk},
      {"lower_bound_check.conf", kExitOk}, {"lattice_lemmas.conf", kExitOk},
      {"multiscale.conf", kExitOk},
  };
  for (const Case& c : cases) {
    CAPTURE(c.file);
    const ScenarioOutcome out = run_config(c.file);
    CHECK(out.exit_code == c.exit_code);
    if (out.exit_code != c.exit_code)
      for (const auto& d : out.diagnostics) MESSAGE(d);
    REQUIRE(out.results.is_object());
    CHECK(out.results["tool"] == "qwlift");
    CHECK(out.results["status"] == "ok");
    for (const auto& check : out.results["checks"]) CHECK(check["passed"] == true);
    CHECK(out.results["artifacts"].size() == out.artifacts.size());
  }
}

TEST_CASE("scenario results") {
  const ScenarioOutcome lmc = run_config("cycle_lmc.conf");
  REQUIRE(lmc.exit_code == kExitOk);
  CHECK(lmc.results["results"]["mixing"][0]["tau"] == 11);

  const ScenarioOutcome walk = run_config("classical_walk.conf");
  REQUIRE(walk.exit_code == kExitOk);
  CHECK(walk.results["results"]["sweep_exponent"].get<double>() ==
        doctest::Approx(2.0).epsilon(0.1));

  const ScenarioOutcome cond = run_config("conductance.conf");
  REQUIRE(cond.exit_code == kExitOk);
  CHECK(cond.results["results"]["phi"].get<double>() == doctest::Approx(0.5));

  const ScenarioOutcome lattice = run_config("lattice_lemmas.conf");
  REQUIRE(lattice.exit_code == kExitOk);
  CHECK(lattice.results["results"]["T"] == 783);

  // The even 8-cycle lift cannot certify mixing and says so.
  const ScenarioOutcome even = run_config("lift_build.conf");
  CHECK_FALSE(even.results["warnings"].empty());
}

TEST_CASE("horizon override and verification") {
  RunOptions opts;
  opts.horizon = 3;
  opts.verify = true;
  opts.seed = 42;
  const ScenarioOutcome out = run_text("scenario.kind = cycle-lmc\ncycle.n = 5\n", opts);
  REQUIRE(out.exit_code == kExitOk);
  CHECK(out.results["parameters"]["--horizon"] == 3);
  CHECK(out.results["results"]["horizon"] == 3);
  CHECK(out.results["seed"] == 42);
  CHECK(out.results["results"]["verify"]["invariance"] == true);
  CHECK(out.results["results"]["mixing"][0]["resolved"] == false);
}

TEST_CASE("an unmet assertion exits with code 2") {
  // Without a fixed period the even-cycle lift needs a mixing time that
  // does not exist.
  const ScenarioOutcome out = run_text(
      "scenario.kind = lift-build\nprocess.kind = cycle-qw\ncycle.n = 8\n"
      "cycle.q = 1/8\n");
  CHECK(out.exit_code == kExitAssertion);
  CHECK(out.results["status"] == "assertion-failed");
  CHECK(mentions(out, "assertion failed"));
}

TEST_CASE("runs are reproducible") {
  for (const char* file : {"cycle_qw.conf", "bridge_build.conf", "conductance.conf"}) {
    CAPTURE(file);
    const ScenarioOutcome a = run_config(file);
    const ScenarioOutcome b = run_config(file);
    CHECK(strip_volatile(a.results) == strip_volatile(b.results));
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i)
      CHECK(a.artifacts[i].content == b.artifacts[i].content);
    CHECK_FALSE(strip_volatile(a.results).contains("generated_at"));
  }
}

TEST_CASE("reports land on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "qwlift-scenario-test";
  std::filesystem::remove_all(dir);
  RunOptions opts;
  opts.out_dir = dir;
  const ScenarioOutcome out = run_config("conductance.conf", opts);
  REQUIRE(out.exit_code == kExitOk);
  emit_report(out);
  CHECK(std::filesystem::exists(dir / "results.json"));
  CHECK(std::filesystem::exists(dir / "witness_chain.csv"));
  std::filesystem::remove_all(dir);
}
