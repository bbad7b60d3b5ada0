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

#ifndef QWLIFT_LIFT_HPP_
#define QWLIFT_LIFT_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qwlift/bridge.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

// Coin register (v0, l) for start node v0 and clock l in [0, T].
// Flat index of (v0, l, v) is (v0 * (T + 1) + l) * |V| + v.
struct ClockLayout {
  std::size_t nodes = 0;
  std::size_t horizon = 0;  // T

  std::size_t coins() const noexcept { return nodes * (horizon + 1); }
  std::size_t coin(NodeId v0, std::size_t l) const noexcept {
    return v0 * (horizon + 1) + l;
  }
  std::size_t index(NodeId v0, std::size_t l, NodeId v) const noexcept {
    return coin(v0, l) * nodes + v;
  }
};

struct ClockLift {
  LiftedChain chain;
  ClockLayout layout;
  bool amplified = false;
  double eps0 = 0.25;
  // bridges[v0] starts at delta_{v0}; kept so the lift can be amplified.
  std::vector<BridgeSequence> bridges;

  std::size_t horizon() const noexcept { return layout.horizon; }
};

// Plain clock lift: layer l -> l + 1 applies P_{l+1}^{(v0)}, layer T stays.
ClockLift clock_lift(std::vector<BridgeSequence> bridges, std::size_t horizon,
                     double eps0 = 0.25);

// Bridges from every basis start, then clock_lift.
ClockLift build_clock_lift(const StochProcess& proc, std::size_t horizon,
                           double eps0 = 0.25);

// Wrap-around variant: the last bridge step lands in (v', 0, v'), so the
// marginal restarts from F[p_T] and has period exactly T. Layer-T states
// are unreachable from F; they jump (v0, T, v) -> (v, 0, v).
ClockLift amplified_lift(const ClockLift& lift);

struct SimulationReport {
  double max_residual = 0.0;  // ||f(P^t F[delta]) - target||_1
  NodeId worst_start = 0;
  std::size_t worst_time = 0;
  std::size_t compared_horizon = 0;
  bool local = true;
};

// Plain lifts are compared for t <= min(horizon, T); amplified lifts for
// all t <= horizon against Psi_{t mod T} (Psi_T)^{floor(t / T)}.
SimulationReport verify_simulation(const ClockLift& lift,
                                   const StochProcess& proc,
                                   std::size_t horizon);

// Columns are Psi_t[delta_v] for v in V.
Eigen::MatrixXd process_matrix(const StochProcess& proc, std::size_t t);

}  // namespace qwlift

#endif  // QWLIFT_LIFT_HPP_
