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

#ifndef QWLIFT_BRIDGE_HPP_
#define QWLIFT_BRIDGE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "qwlift/graph.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

// Residual capacity below this is treated as saturated.
inline constexpr double kFlowTolerance = 1e-12;

// s -> W (capacity y), W -> W' along graph edges (capacity 1),
// W' -> r (capacity z). W and W' are two copies of V.
struct FlowNetwork {
  std::size_t nodes = 0;
  std::vector<double> source_capacity;  // y
  std::vector<double> sink_capacity;    // z
  std::vector<Edge> middle;             // (v, v') in E, sorted

  std::size_t arc_count() const noexcept {
    return source_capacity.size() + sink_capacity.size() + middle.size();
  }
};

FlowNetwork build_flow_network(const Dist& y, const Dist& z, const Graph& g);

struct FlowResult {
  double value = 0.0;
  std::vector<double> middle_flow;  // aligned with FlowNetwork::middle
  // Largest |inflow - outflow| over the internal nodes.
  double conservation_residual = 0.0;
};

// Shortest augmenting paths (Edmonds-Karp) on floating-point capacities.
FlowResult max_flow(const FlowNetwork& net);

bool flow_feasible(const FlowResult& flow);

// P(v', v) = flow(v -> v') / y(v), columns renormalized. Columns with
// y(v) = 0 are delta_v. Throws kInfeasible when the flow value is short of 1.
StochMatrix extract_bridge(const FlowNetwork& net, const FlowResult& flow,
                           const Graph& g);

// Convenience: network, flow and extraction in one call.
StochMatrix solve_bridge(const Dist& y, const Dist& z, const Graph& g);

struct BridgeSequence {
  Dist p0;
  std::string process;
  std::vector<StochMatrix> steps;  // steps[t - 1] maps p_{t-1} to p_t
  std::vector<double> flow_values;  // max-flow value of each step

  std::size_t length() const noexcept { return steps.size(); }
};

BridgeSequence bridge_sequence(const StochProcess& proc, const Dist& p0,
                               std::size_t horizon);

// Largest ||P_t ... P_1 p0 - Psi_t[p0]||_1 over t <= length.
double bridge_residual(const BridgeSequence& seq, const StochProcess& proc);

}  // namespace qwlift

#endif  // QWLIFT_BRIDGE_HPP_
