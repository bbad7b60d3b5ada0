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

#include <cmath>

#include "qwlift/error.hpp"
#include "qwlift/lattice.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/process.hpp"
#include "qwlift/quantum_walk.hpp"
#include "support.hpp"

using namespace qwlift;
using qwlift::testing::Rng;

namespace {

CMatrix hadamard() {
  CMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

KrausChannel hadamard_channel(double q) {
  return measured_unitary_channel(hadamard(), q, {1, 2}, Graph::complete(2));
}

}  // namespace

TEST_CASE("density operators are validated") {
  const LiftedSpace space{1, 2};
  CMatrix ok = CMatrix::Zero(2, 2);
  ok(0, 0) = 1.0;
  CHECK_NOTHROW(DensityOp(space, ok));
  CMatrix not_hermitian = ok;
  not_hermitian(0, 1) = Complex(0.0, 0.3);
  CHECK_THROWS_AS(DensityOp(space, not_hermitian), Error);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOp(space, negative), Error);
}

TEST_CASE("channel validation reports locality and completeness") {
  SUBCASE("scaled identity is incomplete") {
    const KrausChannel ch({1, 2}, Graph::path(2),
                          {KrausOp::from_dense(0.5 * CMatrix::Identity(2, 2))});
    CHECK_FALSE(ch.report().complete);
    CHECK(ch.report().completeness_residual == doctest::Approx(0.75));
  }
  SUBCASE("a hop off the graph is listed") {
    CMatrix swap = CMatrix::Zero(3, 3);
    swap(2, 0) = swap(0, 2) = swap(1, 1) = 1.0;
    const KrausChannel ch({1, 3}, Graph::path(3), {KrausOp::from_dense(swap)});
    CHECK(ch.report().complete);
    CHECK_FALSE(ch.report().local);
    CHECK(ch.report().locality_violations.size() == 2);
    CHECK_THROWS_AS(induced_process(ch, CoinAssignment::constant({1, 3}, 0)),
                    Error);
  }
  SUBCASE("a chain turned into a channel is valid") {
    const LiftedChain chain = cycle_lmc(5, 0.3);
    CHECK(as_channel(chain).report().ok);
  }
}

TEST_CASE("measured unitary channel") {
  CHECK(hadamard_channel(0.0).ops().size() == 1);
  CHECK(hadamard_channel(1.0).ops().size() == 2);
  CHECK(hadamard_channel(0.5).ops().size() == 3);
  CHECK_THROWS_AS(hadamard_channel(1.5), Error);
  CMatrix not_unitary = hadamard();
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(
      measured_unitary_channel(not_unitary, 0.0, {1, 2}, Graph::complete(2)),
      Error);
}

TEST_CASE("the unmeasured Hadamard walk recovers its start") {
  const StochProcess p =
      induced_process(hadamard_channel(0.0), CoinAssignment::constant({1, 2}, 0));
  const Dist p1 = p.evolve(Dist::delta(2, 0), 1);
  const Dist p2 = p.evolve(Dist::delta(2, 0), 2);
  CHECK(std::abs(p1[0] - 0.5) <= 1e-12);
  CHECK(std::abs(p1[1] - 0.5) <= 1e-12);
  CHECK(std::abs(p2[0] - 1.0) <= 1e-12);
  CHECK(std::abs(p2[1]) <= 1e-12);
}

TEST_CASE("the fully measured Hadamard walk is the classical coin flip") {
  const StochProcess p =
      induced_process(hadamard_channel(1.0), CoinAssignment::constant({1, 2}, 0));
  for (std::size_t t = 1; t <= 6; ++t) {
    const Dist pt = p.evolve(Dist::delta(2, 0), t);
    CHECK(std::abs(pt[0] - 0.5) <= 1e-12);
  }
}

TEST_CASE("channel steps") {
  const LiftedSpace space{1, 2};
  SUBCASE("identity channel leaves the state alone") {
    const KrausChannel id(space, Graph::path(2),
                          {KrausOp::from_dense(CMatrix::Identity(2, 2))});
    CMatrix m(2, 2);
    m << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
    const DensityOp rho(space, m);
    CHECK((step(id, rho).matrix() - m).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("Hadamard twice is the identity") {
    const DensityOp rho = init_map(Dist::delta(2, 0), CoinAssignment::constant(space, 0));
    const KrausChannel h = hadamard_channel(0.0);
    const DensityOp twice = step(h, step(h, rho));
    CHECK((twice.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("a chain's channel keeps diagonal states diagonal") {
    const LiftedChain chain = cycle_lmc(4, 0.25);
    const KrausChannel ch = as_channel(chain);
    const DensityOp rho = init_map(Dist::uniform(4), chain.init());
    const DensityOp next = step(ch, rho);
    const CMatrix& m = next.matrix();
    double off = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (i != j) off = std::max(off, std::abs(m(i, j)));
    CHECK(off == 0.0);
    std::vector<double> diag(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      diag[static_cast<std::size_t>(i)] = m(i, i).real();
    std::vector<double> joint0(8, 0.0);
    for (NodeId v = 0; v < 4; ++v) joint0[chain.space().index(chain.init()[v], v)] = 0.25;
    const std::vector<double> expected = chain.transition().apply(joint0);
    CHECK(qwlift::testing::max_abs_diff(diag, expected) <= 1e-15);
  }
}

TEST_CASE("initialization and marginals") {
  const LiftedSpace space{2, 3};
  const CoinAssignment coins(space, {1, 0, 1});
  const DensityOp rho = init_map(Dist({0.5, 0.5, 0.0}), coins);
  CHECK(rho.matrix()(3, 3).real() == 0.5);  // (coin 1, node 0)
  CHECK(rho.matrix()(1, 1).real() == 0.5);  // (coin 0, node 1)
  CHECK(node_marginal(rho).vec() == std::vector<double>{0.5, 0.5, 0.0});

  const DensityOp mixed(space, CMatrix::Identity(6, 6) / 6.0);
  CHECK(qwlift::testing::max_abs_diff(node_marginal(mixed).weights(),
                                      Dist::uniform(3).weights()) <= 1e-15);

  CMatrix psi = CMatrix::Zero(6, 6);
  psi(0, 0) = psi(4, 4) = 0.5;
  psi(0, 4) = psi(4, 0) = 0.5;
  const Dist m = node_marginal(DensityOp(space, psi));
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
}

TEST_CASE("random local channels preserve trace and locality") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 2, 6);
    const Graph g = qwlift::testing::random_connected_graph(rng, n);
    const KrausChannel ch = qwlift::testing::random_local_channel(rng, g, 2, 3);
    REQUIRE(ch.report().ok);
    const CoinAssignment coins = CoinAssignment::constant(ch.space(), 0);
    const StochProcess proc = induced_process(ch, coins);
    for (NodeId v = 0; v < n; ++v) {
      const auto trace = proc.trajectory(Dist::delta(n, v), 12);
      CHECK(check_locality_trace(trace, g).ok);
    }
    DensityOp rho = init_map(qwlift::testing::random_dist(rng, n), coins);
    for (int t = 0; t < 5; ++t) {
      rho = step(ch, rho);
      CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-9);
      CHECK(rho.min_eigenvalue() >= -1e-10);
    }
  }
}

TEST_CASE("induced processes are linear") {
  Rng rng(8);
  const CycleWalk walk = cycle_qw({7, 0.5, 0.3, 0.1, 0.2});
  const StochProcess proc = walk.process();
  for (int trial = 0; trial < 10; ++trial) {
    const Dist p = qwlift::testing::random_dist(rng, 7);
    const Dist q = qwlift::testing::random_dist(rng, 7);
    const double lambda = qwlift::testing::uniform01(rng);
    std::vector<double> mix(7);
    for (std::size_t i = 0; i < 7; ++i) mix[i] = lambda * p[i] + (1 - lambda) * q[i];
    const Dist a = proc.evolve(Dist(mix), 9);
    const Dist bp = proc.evolve(p, 9);
    const Dist bq = proc.evolve(q, 9);
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(std::abs(a[i] - (lambda * bp[i] + (1 - lambda) * bq[i])) <= 1e-10);
  }
}

TEST_CASE("lifted chains embed as channels") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = qwlift::testing::random_connected_graph(rng, 5);
    const LiftedChain chain = qwlift::testing::random_lifted_chain(rng, g, 3);
    const StochProcess via_channel = induced_process(as_channel(chain), chain.init());
    for (NodeId v = 0; v < 5; ++v) {
      auto a = via_channel.start(Dist::delta(5, v));
      auto b = induced_process(chain).start(Dist::delta(5, v));
      for (std::size_t t = 0; t < 50; ++t) {
        a->advance();
        b->advance();
        CHECK(qwlift::testing::max_abs_diff(a->marginal(), b->marginal()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("time-dependent measurement schedules") {
  const KrausOp u = cycle_unitary({5, 0.5, 0.0, 0.0, 0.0});
  const LiftedSpace space{2, 5};
  const ChannelSchedule sched = measured_unitary_schedule(
      u, [](std::size_t t) { return t % 2 == 0 ? 1.0 : 0.0; }, space,
      Graph::cycle(5));
  CHECK(sched(0)->ops().size() == 10);
  CHECK(sched(1)->ops().size() == 1);
  const StochProcess proc = induced_process(sched, Graph::cycle(5),
                                            CoinAssignment::constant(space, 0));
  CHECK(check_invariance(proc, Dist::uniform(5), 20));
}

TEST_CASE("Cesaro averaging") {
  const StochProcess h =
      induced_process(hadamard_channel(0.0), CoinAssignment::constant({1, 2}, 0));
  const Dist p1 = cesaro(h).evolve(Dist::delta(2, 0), 1);
  CHECK(p1[0] == doctest::Approx(0.75));
  CHECK(p1[1] == doctest::Approx(0.25));
  const StochProcess id = markov_process(identity_chain(Graph::path(3)));
  const std::vector<double> still = {0.2, 0.3, 0.5};
  CHECK(qwlift::testing::max_abs_diff(cesaro(id).evolve(Dist(still), 7).weights(),
                                      still) <= 1e-15);
  CHECK(check_invariance(cesaro(cycle_qw({5, 0.5, 0, 0, 0.2}).process()),
                         Dist::uniform(5), 30));
}

TEST_CASE("invariance check") {
  CHECK(check_invariance(cycle_qw({8, 0.5, 0, 0, 0.125}).process(),
                         Dist::uniform(8), 40));
  CHECK(check_invariance(induced_process(cycle_lmc(6, 0.2)), Dist::uniform(6), 40));
  Eigen::MatrixXd biased(2, 2);
  biased << 1.0, 1.0, 0.0, 0.0;
  CHECK_FALSE(check_invariance(
      markov_process(StochMatrix::from_dense(biased, Graph::complete(2))),
      Dist::uniform(2), 3));
}
