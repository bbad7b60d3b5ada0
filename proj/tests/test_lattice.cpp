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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qwlift/error.hpp"
#include "qwlift/lattice.hpp"
#include "support.hpp"

using namespace qwlift;
using qwlift::testing::max_abs_diff;

TEST_CASE("coin matrices are unitary") {
  for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
    const CMatrix c = coin_matrix(alpha, 0.3, -1.1);
    CHECK((c.adjoint() * c - CMatrix::Identity(2, 2)).norm() <= 1e-14);
  }
  const CMatrix h = coin_matrix(0.5, 0.0, 0.0);
  CHECK(h(0, 1).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(h(1, 0).real() == doctest::Approx(-std::sqrt(0.5)));
  CHECK_THROWS_AS(coin_matrix(1.5, 0.0, 0.0), Error);
}

TEST_CASE("a trivial coin rotates the walker") {
  const StochProcess walk = cycle_qw({5, 0.0, 0.0, 0.0, 0.0}).process();
  auto cursor = walk.start(Dist::delta(5, 0));
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK(cursor->marginal()[t % 5] == doctest::Approx(1.0));
    cursor->advance();
  }
}

TEST_CASE("full measurement turns the walk into the lifted chain") {
  for (double alpha : {0.2, 0.5}) {
    const StochProcess qw = cycle_qw({7, alpha, 0.4, 0.9, 1.0}).process();
    const StochProcess lmc = induced_process(cycle_lmc(7, alpha));
    for (NodeId v : {0, 3}) {
      auto a = qw.start(Dist::delta(7, v));
      auto b = lmc.start(Dist::delta(7, v));
      for (std::size_t t = 0; t < 12; ++t) {
        CHECK(max_abs_diff(a->marginal(), b->marginal()) <= 1e-12);
        a->advance();
        b->advance();
      }
    }
  }
}

TEST_CASE("classical walk on small cycles") {
  const ClassicalWalk odd = classical_walk(3);
  CHECK_FALSE(odd.lazy);
  CHECK_FALSE(odd.warning);
  const Dist p1 = markov_process(odd.chain).evolve(Dist::delta(3, 0), 1);
  CHECK(p1[0] == doctest::Approx(0.0));
  CHECK(p1[1] == doctest::Approx(0.5));
  CHECK(p1[2] == doctest::Approx(0.5));

  const ClassicalWalk even = classical_walk(4);
  CHECK(even.lazy);
  CHECK(even.warning);
  CHECK(even.chain(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("torus coordinates") {
  CHECK(torus_index({1, 2}, 3) == 7);
  CHECK(torus_coords(7, 3, 2) == std::vector<std::size_t>{1, 2});
  for (NodeId v = 0; v < 27; ++v) CHECK(torus_index(torus_coords(v, 3, 3), 3) == v);
  const Graph g = torus_graph(3, 2);
  CHECK(g.size() == 9);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 3));
  CHECK(g.has_edge(0, 6));
  CHECK_FALSE(g.has_edge(0, 4));
  CHECK(torus_graph(5, 1) == Graph::cycle(5));
}

TEST_CASE("the one-dimensional torus is the cycle chain") {
  const StochProcess torus = induced_process(torus_lmc({5, 1, {}, {}}));
  const StochProcess cycle = induced_process(cycle_lmc(5, 0.1));
  for (std::size_t t : {1, 4, 9})
    CHECK(max_abs_diff(torus.evolve(Dist::delta(5, 2), t).weights(),
                       cycle.evolve(Dist::delta(5, 2), t).weights()) <= 1e-13);
  // Even sides default to the lazy variant.
  CHECK(TorusParams{4, 1, {}, {}}.resolved_lazy());
  CHECK_FALSE(TorusParams{5, 1, {}, {}}.resolved_lazy());
}

TEST_CASE("lattice lemma constants") {
  CHECK(contraction_proof_horizon(3, 1) == 783);
  const LatticeLemmaReport r = lattice_lemma_checks({5, 1, {}, {}}, 200);
  CHECK(r.coin_toss_probability == doctest::Approx(2.0 * std::pow(0.8, 9.0)));
  CHECK(r.coin_toss_probability > 0.125);
  CHECK(r.axis_threshold == doctest::Approx(1.0 / 80.0));
  CHECK(r.axis_mixed);
  CHECK(r.q == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0));

  const LatticeLemmaReport full =
      lattice_lemma_checks({3, 1, {}, {}}, contraction_proof_horizon(3, 1));
  CHECK(full.horizon == 783);
  CHECK(full.contraction);
  CHECK(full.min_ratio >= full.q);
}

TEST_CASE("window distance") {
  const std::vector<double> flat(9, 1.0 / 9.0);
  CHECK(window_tv(flat, 4, 2) == doctest::Approx(0.0));
  std::vector<double> spike(9, 0.0);
  spike[0] = 1.0;
  CHECK(window_tv(spike, 0, 1) == doctest::Approx(2.0 / 3.0));
  // The arc wraps around node 0.
  CHECK(window_tv(spike, 8, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(window_tv(spike, 4, 1) == 1.0);
  CHECK_THROWS_AS(window_tv(spike, 9, 1), Error);
}

TEST_CASE("the quantum walk spreads faster at intermediate scales") {
  const MultiscaleReport r = multiscale_experiment(64, 16);
  CHECK(r.window == 33);
  CHECK(r.qw_tv < r.lmc_tv);
  const std::vector<MultiscaleReport> series = multiscale_series(16, 3);
  CHECK(series.size() == 4);
  CHECK(series[0].qw_tv == doctest::Approx(0.0));
  CHECK_THROWS_AS(multiscale_series(8, 8), Error);
}
