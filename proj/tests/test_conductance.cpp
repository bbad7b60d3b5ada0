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

#include "qwlift/error.hpp"
#include "qwlift/conductance.hpp"
#include "qwlift/lattice.hpp"
#include "support.hpp"

using namespace qwlift;
using qwlift::testing::Rng;

namespace {

StochMatrix simple_cycle_walk(std::size_t n, bool lazy) {
  const Graph g = Graph::cycle(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double move = lazy ? 0.25 : 0.5;
  for (NodeId v = 0; v < n; ++v) {
    m((v + 1) % n, v) += move;
    m((v + n - 1) % n, v) += move;
    if (lazy) m(v, v) += 0.5;
  }
  return StochMatrix::from_dense(m, g);
}

}  // namespace

TEST_CASE("cut conductance on the 4-cycle") {
  const Dist u = Dist::uniform(4);
  const NodeSet half(4, {0, 1});
  CHECK(phi_cut(simple_cycle_walk(4, false), u, half) == doctest::Approx(0.5));
  CHECK(phi_cut(simple_cycle_walk(4, true), u, half) == doctest::Approx(0.25));
  const CutReport r = cut_report(simple_cycle_walk(4, false), u, half);
  CHECK(r.mass == doctest::Approx(0.5));
  CHECK(r.flow == doctest::Approx(0.25));

  // Cuts heavier than one half are rejected.
  CHECK_THROWS_AS(phi_cut(simple_cycle_walk(4, false), u, NodeSet(4, {0, 1, 2})),
                  Error);
  // So is a target that the chain does not preserve.
  CHECK_THROWS_AS(phi_cut(simple_cycle_walk(4, false),
                          Dist({0.4, 0.2, 0.2, 0.2}), half),
                  Error);
}

TEST_CASE("chain conductance scans every cut") {
  const ChainConductance c = phi_chain(simple_cycle_walk(6, false), Dist::uniform(6));
  // The worst cut is a half-cycle: two boundary edges, mass 1/2.
  CHECK(c.phi == doctest::Approx(1.0 / 3.0));
  CHECK(c.witness.cut.count() == 3);

  // A disconnected chain has a cut nothing leaves.
  const Graph two(2, {});
  const ChainConductance d = phi_chain(identity_chain(two), Dist::uniform(2));
  CHECK(d.phi == 0.0);
}

TEST_CASE("graph conductance of small graphs") {
  const GraphConductance c4 = graph_conductance(Graph::cycle(4), Dist::uniform(4));
  CHECK(c4.phi == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(c4.witness_phi == doctest::Approx(c4.phi).epsilon(1e-8));

  for (std::size_t n : {2, 3}) {
    const GraphConductance k = graph_conductance(Graph::complete(n), Dist::uniform(n));
    CHECK(k.phi == doctest::Approx(1.0).epsilon(1e-9));
  }
  const GraphConductance c8 = graph_conductance(Graph::cycle(8), Dist::uniform(8));
  CHECK(c8.phi == doctest::Approx(0.25).epsilon(1e-9));

  CHECK_THROWS_AS(graph_conductance(Graph::cycle(1), Dist::uniform(1)), Error);
  CHECK_THROWS_AS(graph_conductance(Graph::cycle(4), Dist::uniform(3)), Error);
}

TEST_CASE("the conductance witness is a feasible chain") {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 3, 7);
    const Graph g = qwlift::testing::random_connected_graph(rng, n);
    const Dist pbar = qwlift::testing::random_dist(rng, n);
    const GraphConductance gc = graph_conductance(g, pbar);
    CAPTURE(trial);
    const Eigen::MatrixXd w = gc.witness.dense();
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      CHECK(w.col(j).sum() == doctest::Approx(1.0));
    CHECK(w.minCoeff() >= -1e-12);
    const std::vector<double> moved = gc.witness.apply(pbar.weights());
    CHECK(qwlift::testing::max_abs_diff(moved, pbar.weights()) <= 1e-9);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        if (w(i, j) > 1e-12)
          CHECK(g.has_edge(static_cast<NodeId>(j), static_cast<NodeId>(i)));
    CHECK(gc.witness_phi >= gc.phi - 1e-8);
  }
}

TEST_CASE("projection never lowers conductance") {
  Rng rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 3, 6);
    const Graph g = qwlift::testing::random_connected_graph(rng, n);
    const LiftedChain lifted = qwlift::testing::random_lifted_chain(rng, g, 2);
    const InducedChain ind = induced_chain(lifted);
    const double phi_lifted =
        phi_chain(lifted.transition(), ind.joint_stationary).phi;
    const double phi_projected = phi_chain(ind.chain, ind.stationary).phi;
    const double phi_graph = graph_conductance(g, ind.stationary).phi;
    CAPTURE(trial);
    CHECK(phi_projected >= phi_lifted - 1e-9);
    CHECK(phi_graph >= phi_projected - 1e-8);
  }
}

TEST_CASE("escape from a cut grows at most linearly") {
  const StochMatrix p = simple_cycle_walk(8, true);
  const Dist u = Dist::uniform(8);
  const NodeSet x(8, {0, 1, 2});
  const EscapeReport r = escape_bound_check(p, u, x, 12);
  CHECK(r.holds());
  REQUIRE(r.escape.size() == 13);
  CHECK(r.escape[0] == 0.0);
  CHECK(r.escape[1] == doctest::Approx(r.phi_x));
  CHECK(r.tv[1] == doctest::Approx(r.phi_x));

  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 3, 7);
    const Graph g = qwlift::testing::random_connected_graph(rng, n);
    const Dist pbar = qwlift::testing::random_dist(rng, n);
    const StochMatrix chain = qwlift::testing::random_invariant_chain(rng, g, pbar);
    const ChainConductance c = phi_chain(chain, pbar);
    CHECK(escape_bound_check(chain, pbar, c.witness.cut, 3 * n).holds());
  }
}

TEST_CASE("conductance bounds the mixing time from below") {
  const StochProcess lmc = induced_process(cycle_lmc(8, 0.125));
  const LowerBoundReport r = mixing_lower_bound_check(lmc, Dist::uniform(8), 200);
  CHECK(r.applicable);
  CHECK(r.locality_traced);
  CHECK(r.phi == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.bound == doctest::Approx(1.0));
  CHECK(r.conclusive);
  CHECK(r.holds);

  const StochProcess walk = markov_process(classical_walk(7).chain);
  const LowerBoundReport w = mixing_lower_bound_check(walk, Dist::uniform(7), 300);
  REQUIRE(w.mixing.resolved());
  CHECK(w.holds);
  CHECK(static_cast<double>(*w.mixing.tau) + 1.0 >= w.bound);
}
