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
#include "qwlift/graph.hpp"
#include "qwlift/lmc.hpp"
#include "support.hpp"

using namespace qwlift;
using qwlift::testing::Rng;

TEST_CASE("graphs always carry self-loops") {
  const Graph g(3, {{0, 1}, {1, 2}});
  for (NodeId v = 0; v < 3; ++v) CHECK(g.has_edge(v, v));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.edge_count() == 7);
  CHECK_THROWS_AS(Graph(2, {{0, 5}}), Error);
}

TEST_CASE("directed graphs keep orientation") {
  const Graph g(3, {{0, 1}}, Symmetry::kDirected);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 0));
  CHECK(g.predecessors(1).size() == 2);
}

TEST_CASE("neighborhood") {
  SUBCASE("path end") {
    const Graph g = Graph::path(3);
    CHECK(neighborhood(g, NodeSet(3, {2})).members() ==
          std::vector<NodeId>{1});
  }
  SUBCASE("whole node set has empty boundary") {
    CHECK(neighborhood(Graph::cycle(5), NodeSet::all(5)).empty());
  }
  SUBCASE("half of the 4-cycle") {
    CHECK(neighborhood(Graph::cycle(4), NodeSet(4, {0, 1})).members() ==
          std::vector<NodeId>{2, 3});
  }
}

TEST_CASE("neighborhood never meets the set") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = qwlift::testing::random_connected_graph(rng, 7);
    const NodeSet x = NodeSet::from_mask(7, rng() & 0x7f);
    const NodeSet b = neighborhood(g, x);
    for (NodeId v : b.members()) CHECK_FALSE(x.contains(v));
  }
}

TEST_CASE("total variation distance") {
  const Dist d1 = Dist::delta(2, 0);
  CHECK(tv_distance(d1, d1) == 0.0);
  CHECK(tv_distance(d1, Dist::uniform(2)) == doctest::Approx(0.5));
  CHECK(tv_distance(d1, Dist::delta(2, 1)) == doctest::Approx(1.0));
}

TEST_CASE("total variation is a metric on random triples") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Dist p = qwlift::testing::random_dist(rng, 6);
    const Dist q = qwlift::testing::random_dist(rng, 6);
    const Dist r = qwlift::testing::random_dist(rng, 6);
    CHECK(tv_distance(p, q) >= 0.0);
    CHECK(tv_distance(p, q) == doctest::Approx(tv_distance(q, p)));
    CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-15);
  }
}

TEST_CASE("distributions are validated") {
  CHECK_THROWS_AS(Dist({0.5, 0.6}), Error);
  CHECK_THROWS_AS(Dist({1.2, -0.2}), Error);
  CHECK_NOTHROW(Dist({0.5, 0.5 + 1e-12}));
}

TEST_CASE("locality trace") {
  const Graph g = Graph::path(3);
  SUBCASE("a jump across the path is caught") {
    const std::vector<Dist> trace{Dist::delta(3, 0), Dist::delta(3, 2)};
    const LocalityReport r = check_locality_trace(trace, g);
    CHECK_FALSE(r.ok);
    CHECK(r.first.step == 0);
    CHECK(r.first.cut.contains(2));
  }
  SUBCASE("only steps along edges pass") {
    const std::vector<Dist> trace{Dist::delta(3, 0), Dist::uniform(3),
                                  Dist({0.0, 0.5, 0.5})};
    CHECK_FALSE(check_locality_trace(trace, g).ok);
    const std::vector<Dist> ok{Dist::delta(3, 0), Dist({0.5, 0.5, 0.0})};
    CHECK(check_locality_trace(ok, g).ok);
  }
}

TEST_CASE("traces of local chains satisfy the locality inequality") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = qwlift::testing::pick(rng, 2, 8);
    const Graph g = qwlift::testing::random_connected_graph(rng, n);
    const StochMatrix m = qwlift::testing::random_local_chain(rng, g);
    const Dist p = qwlift::testing::random_dist(rng, n);
    const std::vector<Dist> trace{p, Dist(m.apply(p.weights()))};
    CHECK(check_locality_trace(trace, g).ok);
  }
}

TEST_CASE("edge list round trip") {
  const Graph g = parse_edge_list("# a triangle with a tail\n4\n1 2\n2 3\n3 1\n3 4\n");
  CHECK(g.size() == 4);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(3, 2));
  CHECK_FALSE(g.has_edge(0, 3));
  CHECK(parse_edge_list(format_edge_list(g)) == g);
  CHECK_THROWS_AS(parse_edge_list("3\n1 9\n"), Error);
  CHECK_THROWS_AS(parse_edge_list("x\n"), Error);
}

TEST_CASE("composition of graphs is the two-step reachability") {
  const Graph two = compose(Graph::path(4), Graph::path(4));
  CHECK(two.has_edge(0, 2));
  CHECK_FALSE(two.has_edge(0, 3));
}
