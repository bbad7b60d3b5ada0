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

#include "qwlift/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qwlift/error.hpp"

namespace qwlift {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, x);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorCode::kIo, "cannot open ", path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      detail::fail(ErrorCode::kIo, "cannot create ",
                   path.parent_path().string(), ": ", ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) detail::fail(ErrorCode::kIo, "cannot write ", path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) detail::fail(ErrorCode::kIo, "short write to ", path.string());
}

Json channel_to_json(const KrausChannel& ch) {
  Json j;
  j["coins"] = ch.space().coins;
  j["nodes"] = ch.space().nodes;
  Json ops = Json::array();
  for (const KrausOp& op : ch.ops()) {
    const CMatrix m = op.dense();
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  j["operators"] = std::move(ops);
  return j;
}

KrausChannel channel_from_json(const Json& j, const Graph& g) {
  try {
    const LiftedSpace space{j.at("coins").get<std::size_t>(),
                            j.at("nodes").get<std::size_t>()};
    QWLIFT_REQUIRE(space.nodes == g.size(), ErrorCode::kDimensionMismatch,
                   "channel over ", space.nodes, " nodes, graph has ",
                   g.size());
    const auto dim = static_cast<Eigen::Index>(space.dim());
    std::vector<KrausOp> ops;
    for (const Json& rows : j.at("operators")) {
      QWLIFT_REQUIRE(static_cast<Eigen::Index>(rows.size()) == dim,
                     ErrorCode::kParse, "operator has ", rows.size(),
                     " rows, expected ", dim);
      CMatrix m(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        const Json& row = rows[static_cast<std::size_t>(r)];
        QWLIFT_REQUIRE(static_cast<Eigen::Index>(row.size()) == dim,
                       ErrorCode::kParse, "operator row ", r, " has ",
                       row.size(), " entries, expected ", dim);
        for (Eigen::Index c = 0; c < dim; ++c) {
          const Json& z = row[static_cast<std::size_t>(c)];
          m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
        }
      }
      ops.push_back(KrausOp::from_dense(m));
    }
    return KrausChannel(space, g, std::move(ops));
  } catch (const nlohmann::json::exception& e) {
    detail::fail(ErrorCode::kParse, "malformed channel JSON: ", e.what());
  }
}

std::string matrix_csv(const StochMatrix& p) {
  const Eigen::MatrixXd m = p.dense();
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_number(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        detail::fail(ErrorCode::kParse, "bad matrix entry '", cell, "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      detail::fail(ErrorCode::kParse, "ragged matrix CSV at row ",
                   rows.size() + 1);
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = n == 0 ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < k; ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

Json matrix_sidecar(const StochMatrix& p, const CoinAssignment* coins) {
  Json j;
  j["coins"] = p.coins();
  j["nodes"] = p.graph().size();
  j["layout"] = "coin-major: index = coin * nodes + node, zero-based";
  j["columns"] = "source state; rows are target states";
  if (coins != nullptr) j["coin_assignment"] = coins->coins();
  return j;
}

std::string triplet_csv(const StochMatrix& p) {
  std::string out = "from,to,probability\n";
  const SparseMatrix& m = p.matrix();
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      out += std::to_string(j);
      out += ',';
      out += std::to_string(it.row());
      out += ',';
      out += format_number(it.value());
      out += '\n';
    }
  return out;
}

Json lift_manifest(const ClockLift& lift, std::string_view triplet_file) {
  Json j;
  j["triplets"] = std::string(triplet_file);
  j["nodes"] = lift.layout.nodes;
  j["horizon"] = lift.layout.horizon;
  j["amplified"] = lift.amplified;
  j["eps0"] = round_sig(lift.eps0);
  j["states"] = lift.chain.space().dim();
  j["index"] = "(v0 * (T + 1) + l) * nodes + v, zero-based; v0-major, then "
               "l, then v";
  j["initial_coin"] = "(v, 0) for start node v";
  return j;
}

std::vector<Artifact> bridge_artifacts(const std::vector<BridgeSequence>& seqs,
                                       std::string_view dir) {
  std::vector<Artifact> out;
  Json manifest = Json::array();
  const std::string base(dir);
  for (const BridgeSequence& seq : seqs) {
    NodeId start = 0;
    for (NodeId v = 0; v < seq.p0.size(); ++v)
      if (seq.p0[v] == 1.0) start = v;
    for (std::size_t t = 0; t < seq.steps.size(); ++t) {
      const std::string name = "bridge_s" + std::to_string(start + 1) +
                               "_t" + std::to_string(t + 1) + ".csv";
      out.push_back({base + "/" + name, matrix_csv(seq.steps[t])});
      manifest.push_back(
          Json{{"start", start + 1}, {"step", t + 1}, {"file", name}});
    }
  }
  out.push_back({base + "/manifest.json", manifest.dump(2) + "\n"});
  return out;
}

}  // namespace qwlift
