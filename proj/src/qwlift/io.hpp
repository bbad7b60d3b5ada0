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

#ifndef QWLIFT_IO_HPP_
#define QWLIFT_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwlift/bridge.hpp"
#include "qwlift/lift.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/quantum_walk.hpp"

namespace qwlift {

using Json = nlohmann::ordered_json;

// Every floating-point value leaving the library goes through these.
inline constexpr int kOutputDigits = 12;
double round_sig(double x, int digits = kOutputDigits);
std::string format_number(double x);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// {"coins", "nodes", "operators": [[[re, im], ...row], ...]} with each
// operator dense and row-major.
Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j, const Graph& g);

// Dense CSV, one row per target state.
std::string matrix_csv(const StochMatrix& p);
Eigen::MatrixXd parse_matrix_csv(std::string_view text);
// Sidecar naming |C|, |V| and the coin assignment (zero-based coins).
Json matrix_sidecar(const StochMatrix& p, const CoinAssignment* coins);

// Sparse "from,to,probability" rows, zero-based flat indices.
std::string triplet_csv(const StochMatrix& p);
Json lift_manifest(const ClockLift& lift, std::string_view triplet_file);

struct Artifact {
  std::string name;     // relative path inside the output directory
  std::string content;
};

// One CSV per bridge step plus a manifest naming (start, step) for each.
std::vector<Artifact> bridge_artifacts(const std::vector<BridgeSequence>& seqs,
                                       std::string_view dir);

}  // namespace qwlift

#endif  // QWLIFT_IO_HPP_
