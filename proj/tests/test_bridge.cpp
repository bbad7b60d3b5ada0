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

#include <doctest.h>

#include "qwlift/bridge.hpp"
#include "qwlift/error.hpp"
#include "qwlift/lattice.hpp"
#include "support.hpp"

using namespace qwlift;
using qwlift::testing::Rng;

TEST_CASE("flow network layout") {
  const FlowNetwork net =
      build_flow_network(Dist::delta(2, 0), Dist::uniform(2), Graph::complete(2));
  CHECK(net.middle.size() == 4);
  CHECK(net.arc_count() == 8);
  const FlowNetwork tri =
      build_flow_network(Dist::uniform(3), Dist::uniform(3), Graph::cycle(3));
  CHECK(tri.middle.size() == 9);
  CHECK(tri.source_capacity == std::vector<double>(3, 1.0 / 3.0));
  CHECK_THROWS_AS(
      build_flow_network(Dist::uniform(2), Dist::uniform(3), Graph::cycle(3)),
      Error);
}

TEST_CASE("max flow and bridge extraction on two nodes") {
  const Graph g = Graph::complete(2);
  const FlowNetwork net = build_flow_network(Dist::delta(2, 0), Dist::uniform(2), g);
  const FlowResult flow = max_flow(net);
  CHECK(flow.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flow.conservation_residual <= 1e-12);
  const StochMatrix p = extract_bridge(net, flow, g);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == 1.0);  // empty column is left on its self-loop
  CHECK(p(0, 1) == 0.0);
}

TEST_CASE("a point mass staying put") {
  const StochMatrix p =
      solve_bridge(Dist::delta(4, 2), Dist::delta(4, 2), Graph::cycle(4));
  CHECK(p(2, 2) == 1.0);
}

TEST_CASE("jumps across the path are infeasible") {
  const Graph g = Graph::path(3);
  const FlowNetwork net = build_flow_network(Dist::delta(3, 0), Dist::delta(3, 2), g);
  const FlowResult flow = max_flow(net);
  CHECK(flow.value < 1.0 - 1e-9);
  CHECK_FALSE(flow_feasible(flow));
  CHECK_THROWS_AS(extract_bridge(net, flow, g), Error);
}

TEST_CASE("feasibility matches the locality inequality") {
  Rng rng(9);
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 2, 8);
    const Graph g = qwlift::testing::random_connected_graph(rng, n, 0.1);
    // Odd trials start from a point mass, which most random targets cannot
    // be reached from in one step.
    const Dist y = trial % 2 == 0 ? qwlift::testing::random_dist(rng, n)
                                  : Dist::delta(n, qwlift::testing::pick(rng, 0, n - 1));
    Dist z = trial % 2 == 0
                 ? Dist(qwlift::testing::random_local_chain(rng, g).apply(y.weights()))
                 : qwlift::testing::random_dist(rng, n);
    const bool flow_ok = flow_feasible(max_flow(build_flow_network(y, z, g)));
    const bool local_ok = max_locality_excess(y.weights(), z.weights(), g).excess <= 1e-9;
    CHECK(flow_ok == local_ok);
    (flow_ok ? feasible : infeasible) += 1;
    if (flow_ok) {
      const StochMatrix p = solve_bridge(y, z, g);
      CHECK(qwlift::testing::l1_diff(p.apply(y.weights()), z.weights()) <= 1e-9);
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 10);
}

TEST_CASE("bridges of a single chain reproduce its trace") {
  Rng rng(14);
  const Graph g = qwlift::testing::random_connected_graph(rng, 6);
  const StochMatrix m = qwlift::testing::random_local_chain(rng, g);
  const StochProcess proc = markov_process(m);
  const BridgeSequence seq = bridge_sequence(proc, Dist::delta(6, 3), 10);
  CHECK(seq.length() == 10);
  CHECK(bridge_residual(seq, proc) <= 1e-8);
  for (const StochMatrix& step : seq.steps)
    for (const auto& [v, w] : compose(g, g).edges())
      if (!g.has_edge(v, w)) CHECK(step(w, v) == 0.0);
}

TEST_CASE("bridges of the Hadamard walk") {
  const BridgeSequence seq = bridge_sequence(hadamard_process(), Dist::delta(2, 0), 2);
  const std::vector<double> p1 = seq.steps[0].apply(Dist::delta(2, 0).weights());
  CHECK(p1[0] == doctest::Approx(0.5));
  CHECK(seq.steps[1](0, 0) == doctest::Approx(1.0));
  CHECK(seq.steps[1](0, 1) == doctest::Approx(1.0));
}

TEST_CASE("bridges of the measured cycle walk") {
  const StochProcess proc = cycle_qw({8, 0.5, 0.0, 0.0, 0.125}).process();
  for (NodeId v = 0; v < 8; ++v) {
    const BridgeSequence seq = bridge_sequence(proc, Dist::delta(8, v), 16);
    for (double f : seq.flow_values) CHECK(std::abs(f - 1.0) <= 1e-9);
    CHECK(bridge_residual(seq, proc) <= 1e-9);
  }
}

TEST_CASE("a process that teleports has no bridge") {
  const Graph g = Graph::path(4);
  const StochProcess jumpy = StochProcess::from_steps(
      g, [](const std::vector<double>& p, std::size_t) {
        return std::vector<double>(p.rbegin(), p.rend());
      });
  CHECK_THROWS_AS(bridge_sequence(jumpy, Dist::delta(4, 0), 3), Error);
}
