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

#include "qwlift/lift.hpp"

#include <algorithm>
#include <cmath>

#include "qwlift/error.hpp"

namespace qwlift {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void check_bridges(const std::vector<BridgeSequence>& bridges,
                   std::size_t horizon) {
  QWLIFT_REQUIRE(horizon >= 1, ErrorCode::kInvalidArgument,
                 "clock lift needs T >= 1");
  QWLIFT_REQUIRE(!bridges.empty(), ErrorCode::kInvalidArgument,
                 "clock lift needs one bridge sequence per node");
  const std::size_t n = bridges.size();
  const Graph& g = bridges.front().steps.empty()
                       ? Graph()
                       : bridges.front().steps.front().graph();
  for (NodeId v0 = 0; v0 < n; ++v0) {
    const BridgeSequence& seq = bridges[v0];
    QWLIFT_REQUIRE(seq.length() == horizon, ErrorCode::kDimensionMismatch,
                   "bridge sequence for start ", v0, " has length ",
                   seq.length(), ", expected ", horizon);
    QWLIFT_REQUIRE(seq.p0.size() == n && seq.p0[v0] == 1.0,
                   ErrorCode::kInvalidArgument,
                   "bridge sequence ", v0, " does not start at delta_", v0);
    for (const StochMatrix& p : seq.steps)
      QWLIFT_REQUIRE(p.coins() == 1 && p.graph() == g,
                     ErrorCode::kDimensionMismatch,
                     "bridge for start ", v0, " lives on another graph");
  }
}

// Layer l -> l + 1 blocks for l < last_layer, shifted by one layer.
void add_bridge_blocks(const ClockLayout& lay,
                       const std::vector<BridgeSequence>& bridges,
                       std::size_t last_step, Triplets& out) {
  for (NodeId v0 = 0; v0 < lay.nodes; ++v0)
    for (std::size_t l = 0; l < last_step; ++l) {
      const SparseMatrix& m = bridges[v0].steps[l].matrix();
      for (Eigen::Index j = 0; j < m.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(m, j); it; ++it)
          out.emplace_back(
              static_cast<Eigen::Index>(lay.index(
                  v0, l + 1, static_cast<NodeId>(it.row()))),
              static_cast<Eigen::Index>(
                  lay.index(v0, l, static_cast<NodeId>(j))),
              it.value());
    }
}

ClockLift assemble(std::vector<BridgeSequence> bridges, ClockLayout lay,
                   bool amplified, double eps0, Triplets entries) {
  const Graph g = bridges.front().steps.front().graph();
  const auto dim = static_cast<Eigen::Index>(lay.coins() * lay.nodes);
  SparseMatrix p(dim, dim);
  p.setFromTriplets(entries.begin(), entries.end());
  std::vector<std::size_t> coins(lay.nodes);
  for (NodeId v = 0; v < lay.nodes; ++v) coins[v] = lay.coin(v, 0);
  StochMatrix transition(std::move(p), g, lay.coins());
  CoinAssignment init(transition.space(), std::move(coins));
  return ClockLift{LiftedChain(std::move(transition), std::move(init)), lay,
                   amplified, eps0, std::move(bridges)};
}

}  // namespace

ClockLift clock_lift(std::vector<BridgeSequence> bridges, std::size_t horizon,
                     double eps0) {
  check_bridges(bridges, horizon);
  const ClockLayout lay{bridges.size(), horizon};
  Triplets entries;
  add_bridge_blocks(lay, bridges, horizon, entries);
  for (NodeId v0 = 0; v0 < lay.nodes; ++v0)
    for (NodeId v = 0; v < lay.nodes; ++v) {
      const auto i = static_cast<Eigen::Index>(lay.index(v0, horizon, v));
      entries.emplace_back(i, i, 1.0);
    }
  return assemble(std::move(bridges), lay, false, eps0, std::move(entries));
}

ClockLift build_clock_lift(const StochProcess& proc, std::size_t horizon,
                           double eps0) {
  const std::size_t n = proc.num_nodes();
  std::vector<BridgeSequence> bridges;
  bridges.reserve(n);
  for (NodeId v0 = 0; v0 < n; ++v0)
    bridges.push_back(bridge_sequence(proc, Dist::delta(n, v0), horizon));
  return clock_lift(std::move(bridges), horizon, eps0);
}

ClockLift amplified_lift(const ClockLift& lift) {
  QWLIFT_REQUIRE(!lift.amplified, ErrorCode::kInvalidArgument,
                 "lift is already amplified");
  const ClockLayout lay = lift.layout;
  const std::size_t horizon = lay.horizon;
  Triplets entries;
  add_bridge_blocks(lay, lift.bridges, horizon - 1, entries);
  for (NodeId v0 = 0; v0 < lay.nodes; ++v0) {
    // Final bridge step wraps straight into the start layer of its target.
    const SparseMatrix& m = lift.bridges[v0].steps[horizon - 1].matrix();
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
        const auto to = static_cast<NodeId>(it.row());
        entries.emplace_back(
            static_cast<Eigen::Index>(lay.index(to, 0, to)),
            static_cast<Eigen::Index>(
                lay.index(v0, horizon - 1, static_cast<NodeId>(j))),
            it.value());
      }
    for (NodeId v = 0; v < lay.nodes; ++v)
      entries.emplace_back(static_cast<Eigen::Index>(lay.index(v, 0, v)),
                           static_cast<Eigen::Index>(lay.index(v0, horizon, v)),
                           1.0);
  }
  return assemble(lift.bridges, lay, true, lift.eps0, std::move(entries));
}

Eigen::MatrixXd process_matrix(const StochProcess& proc, std::size_t t) {
  const std::size_t n = proc.num_nodes();
  Eigen::MatrixXd a(n, n);
  for (NodeId v = 0; v < n; ++v) {
    const Dist p = proc.evolve(Dist::delta(n, v), t);
    for (NodeId w = 0; w < n; ++w) a(static_cast<Eigen::Index>(w),
                                     static_cast<Eigen::Index>(v)) = p[w];
  }
  return a;
}

SimulationReport verify_simulation(const ClockLift& lift,
                                   const StochProcess& proc,
                                   std::size_t horizon) {
  const std::size_t n = lift.layout.nodes;
  const std::size_t period = lift.layout.horizon;
  QWLIFT_REQUIRE(proc.num_nodes() == n, ErrorCode::kDimensionMismatch,
                 "lift over ", n, " nodes, process over ", proc.num_nodes());
  SimulationReport report;
  report.compared_horizon = lift.amplified ? horizon : std::min(horizon, period);

  // Psi_r[delta_v] for r <= T, one trajectory per start.
  std::vector<Eigen::MatrixXd> psi(period + 1, Eigen::MatrixXd(n, n));
  for (NodeId v = 0; v < n; ++v) {
    auto cursor = proc.start(Dist::delta(n, v));
    for (std::size_t r = 0;; ++r) {
      const auto& m = cursor->marginal();
      for (NodeId w = 0; w < n; ++w)
        psi[r](static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(v)) =
            m[w];
      if (r == period) break;
      cursor->advance();
    }
  }

  const SparseMatrix& p = lift.chain.transition().matrix();
  const LiftedSpace space = lift.chain.space();
  const auto dim = static_cast<Eigen::Index>(space.dim());
  Eigen::VectorXd x(dim);
  Eigen::VectorXd y(dim);
  for (NodeId v = 0; v < n; ++v) {
    const std::vector<double> joint = lift.chain.lift(Dist::delta(n, v));
    x = Eigen::Map<const Eigen::VectorXd>(joint.data(), dim);
    Eigen::VectorXd restart = Eigen::VectorXd::Unit(
        static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(v));
    for (std::size_t t = 0; t <= report.compared_horizon; ++t) {
      if (t > 0) {
        y.noalias() = p * x;
        x.swap(y);
      }
      if (t > 0 && t % period == 0) restart = psi[period] * restart;
      const Eigen::VectorXd target = psi[t % period] * restart;
      Eigen::VectorXd marginal = Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < dim; ++i)
        marginal(static_cast<Eigen::Index>(
            space.node_of(static_cast<std::size_t>(i)))) += x(i);
      const double err = (marginal - target).lpNorm<1>();
      if (err > report.max_residual) {
        report.max_residual = err;
        report.worst_start = v;
        report.worst_time = t;
      }
    }
  }

  const Graph& g = lift.chain.base_graph();
  for (Eigen::Index j = 0; j < p.outerSize() && report.local; ++j)
    for (SparseMatrix::InnerIterator it(p, j); it; ++it)
      if (!g.has_edge(space.node_of(static_cast<std::size_t>(j)),
                      space.node_of(static_cast<std::size_t>(it.row())))) {
        report.local = false;
        break;
      }
  return report;
}

}  // namespace qwlift
