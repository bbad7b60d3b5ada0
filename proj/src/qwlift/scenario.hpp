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

#ifndef QWLIFT_SCENARIO_HPP_
#define QWLIFT_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qwlift/io.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

// Flat "key = value" file. Keys use dotted namespaces, '#' starts a
// comment, values may be rationals ("1/16") or comma-separated lists.
class Config {
 public:
  static Config parse(std::string_view text);

  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, std::string fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key) const;
  std::size_t count_or(const std::string& key, std::size_t fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  // Keys never read by the scenario; any of them is a validation error.
  std::vector<std::string> unused() const;
  const std::map<std::string, std::string>& entries() const noexcept {
    return values_;
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
  mutable std::set<std::string> used_;
};

// Parses "3", "0.25", "1/16" or "-1e-3".
double parse_number(std::string_view text);

inline constexpr const char* kScenarioKinds[] = {
    "cycle-qw",     "cycle-lmc",         "classical-walk", "torus-lmc",
    "bridge-build", "lift-build",        "conductance",    "lower-bound-check",
    "lattice-lemmas", "multiscale"};

struct Scenario {
  std::string kind;
  Config config;
  std::filesystem::path base_dir;  // resolves relative file references
};

Scenario parse_scenario(std::string_view text,
                        std::filesystem::path base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::size_t> horizon;
  std::optional<std::int64_t> seed;  // recorded only; the core is deterministic
  bool verify = false;
  std::filesystem::path out_dir;     // empty: output.dir or "qwlift-out"
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAssertion = 2;

struct ScenarioOutcome {
  int exit_code = kExitOk;
  Json results;                  // the results.json document
  std::vector<Artifact> artifacts;
  std::vector<std::string> diagnostics;
  std::filesystem::path out_dir;
};

// Never throws: validation problems become exit code 1 with diagnostics.
ScenarioOutcome run_scenario(const Scenario& s, const RunOptions& opts);
ScenarioOutcome run_scenario_text(std::string_view text,
                                  const RunOptions& opts,
                                  std::filesystem::path base_dir = {});

// Writes results.json and every artifact under outcome.out_dir.
void emit_report(const ScenarioOutcome& outcome);

// results.json without the timestamp, for reproducibility checks.
Json strip_volatile(Json results);

}  // namespace qwlift

#endif  // QWLIFT_SCENARIO_HPP_
