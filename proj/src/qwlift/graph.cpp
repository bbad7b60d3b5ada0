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

#include "qwlift/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "qwlift/error.hpp"

namespace qwlift {

Graph::Graph(std::size_t n, std::span<const Edge> edges, Symmetry symmetry)
    : directed_(symmetry == Symmetry::kDirected),
      successors_(n),
      predecessors_(n) {
  QWLIFT_REQUIRE(n > 0, ErrorCode::kInvalidArgument, "graph needs >= 1 node");
  auto add = [&](NodeId from, NodeId to) {
    successors_[from].push_back(to);
    predecessors_[to].push_back(from);
  };
  for (NodeId v = 0; v < n; ++v) add(v, v);
  for (const auto& [from, to] : edges) {
    QWLIFT_REQUIRE(from < n && to < n, ErrorCode::kInvalidArgument,
                   "edge (", from, ",", to, ") out of range for n=", n);
    add(from, to);
    if (!directed_) add(to, from);
  }
  for (auto* lists : {&successors_, &predecessors_}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }
  for (const auto& l : successors_) edge_count_ += l.size();
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return Graph(n, e);
}

Graph Graph::cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph(n, e);
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

bool Graph::has_edge(NodeId from, NodeId to) const {
  QWLIFT_REQUIRE(from < size() && to < size(), ErrorCode::kInvalidArgument,
                 "node index out of range");
  const auto& s = successors_[from];
  return std::binary_search(s.begin(), s.end(), to);
}

std::span<const NodeId> Graph::successors(NodeId v) const {
  QWLIFT_REQUIRE(v < size(), ErrorCode::kInvalidArgument,
                 "node index out of range");
  return successors_[v];
}

std::span<const NodeId> Graph::predecessors(NodeId v) const {
  QWLIFT_REQUIRE(v < size(), ErrorCode::kInvalidArgument,
                 "node index out of range");
  return predecessors_[v];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId v = 0; v < size(); ++v)
    for (NodeId w : successors_[v]) out.emplace_back(v, w);
  return out;
}

// ---------------------------------------------------------------------------

Dist::Dist(std::vector<double> weights) : weights_(std::move(weights)) {
  QWLIFT_REQUIRE(!weights_.empty(), ErrorCode::kInvalidArgument,
                 "empty distribution");
  double sum = 0.0;
  for (double w : weights_) {
    QWLIFT_REQUIRE(std::isfinite(w) && w >= -kSumTolerance &&
                       w <= 1.0 + kSumTolerance,
                   ErrorCode::kInvalidArgument, "weight ", w,
                   " outside [0,1]");
    sum += w;
  }
  QWLIFT_REQUIRE(std::abs(sum - 1.0) <= kSumTolerance,
                 ErrorCode::kInvalidArgument, "weights sum to ", sum);
}

Dist Dist::delta(std::size_t n, std::size_t at) {
  QWLIFT_REQUIRE(at < n, ErrorCode::kInvalidArgument, "delta index ", at,
                 " out of range for n=", n);
  std::vector<double> w(n, 0.0);
  w[at] = 1.0;
  return Dist(std::move(w));
}

Dist Dist::uniform(std::size_t n) {
  QWLIFT_REQUIRE(n > 0, ErrorCode::kInvalidArgument, "empty distribution");
  return Dist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------

NodeSet::NodeSet(std::size_t universe, std::initializer_list<NodeId> members)
    : bits_(universe, false) {
  for (NodeId v : members) insert(v);
}

NodeSet NodeSet::from_mask(std::size_t universe, std::uint64_t mask) {
  QWLIFT_REQUIRE(universe <= 64, ErrorCode::kTooLarge,
                 "bitmask sets limited to 64 nodes");
  QWLIFT_REQUIRE(universe == 64 || (mask >> universe) == 0,
                 ErrorCode::kInvalidArgument, "mask has bits beyond universe");
  NodeSet s(universe);
  for (std::size_t v = 0; v < universe; ++v) s.bits_[v] = (mask >> v) & 1u;
  return s;
}

NodeSet NodeSet::all(std::size_t universe) {
  NodeSet s(universe);
  s.bits_.assign(universe, true);
  return s;
}

bool NodeSet::contains(NodeId v) const {
  QWLIFT_REQUIRE(v < bits_.size(), ErrorCode::kInvalidArgument, "node ", v,
                 " outside set universe ", bits_.size());
  return bits_[v];
}

void NodeSet::insert(NodeId v) {
  QWLIFT_REQUIRE(v < bits_.size(), ErrorCode::kInvalidArgument, "node ", v,
                 " outside set universe ", bits_.size());
  bits_[v] = true;
}

void NodeSet::erase(NodeId v) {
  QWLIFT_REQUIRE(v < bits_.size(), ErrorCode::kInvalidArgument, "node ", v,
                 " outside set universe ", bits_.size());
  bits_[v] = false;
}

std::size_t NodeSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<NodeId> NodeSet::members() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < bits_.size(); ++v)
    if (bits_[v]) out.push_back(v);
  return out;
}

NodeSet NodeSet::complement() const {
  NodeSet s(universe());
  for (NodeId v = 0; v < bits_.size(); ++v) s.bits_[v] = !bits_[v];
  return s;
}

std::uint64_t NodeSet::mask() const {
  QWLIFT_REQUIRE(universe() <= 64, ErrorCode::kTooLarge,
                 "bitmask sets limited to 64 nodes");
  std::uint64_t m = 0;
  for (NodeId v = 0; v < bits_.size(); ++v)
    if (bits_[v]) m |= std::uint64_t{1} << v;
  return m;
}

Graph compose(const Graph& first, const Graph& second) {
  QWLIFT_REQUIRE(first.size() == second.size(), ErrorCode::kDimensionMismatch,
                 "composing graphs of sizes ", first.size(), " and ",
                 second.size());
  std::vector<Edge> e;
  for (NodeId u = 0; u < first.size(); ++u)
    for (NodeId v : first.successors(u))
      for (NodeId w : second.successors(v)) e.emplace_back(u, w);
  return Graph(first.size(), e,
               first.directed() || second.directed() ? Symmetry::kDirected
                                                     : Symmetry::kSymmetric);
}

// ---------------------------------------------------------------------------

NodeSet neighborhood(const Graph& g, const NodeSet& x) {
  QWLIFT_REQUIRE(x.universe() == g.size(), ErrorCode::kDimensionMismatch,
                 "node set universe ", x.universe(), " != graph size ",
                 g.size());
  NodeSet b(g.size());
  for (NodeId v : x.members())
    for (NodeId u : g.predecessors(v))
      if (!x.contains(u)) b.insert(u);
  return b;
}

double mass(std::span<const double> p, const NodeSet& x) {
  QWLIFT_REQUIRE(p.size() == x.universe(), ErrorCode::kDimensionMismatch,
                 "distribution size ", p.size(), " != set universe ",
                 x.universe());
  double m = 0.0;
  for (NodeId v : x.members()) m += p[v];
  return m;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  QWLIFT_REQUIRE(p.size() == q.size(), ErrorCode::kDimensionMismatch,
                 "tv_distance on sizes ", p.size(), " and ", q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

LocalityViolation max_locality_excess(std::span<const double> y,
                                      std::span<const double> z,
                                      const Graph& g) {
  const std::size_t n = g.size();
  QWLIFT_REQUIRE(y.size() == n && z.size() == n, ErrorCode::kDimensionMismatch,
                 "locality scan needs distributions over ", n, " nodes");
  QWLIFT_REQUIRE(n <= kMaxLocalityScanNodes, ErrorCode::kTooLarge,
                 "exhaustive subset scan limited to ", kMaxLocalityScanNodes,
                 " nodes, got ", n);

  // Gray-code walk over all X. covered[v] counts members of X reachable from
  // v in one step; X u B(X) = {v : covered[v] > 0}.
  std::vector<int> covered(n, 0);
  std::vector<bool> in_x(n, false);
  double z_on_x = 0.0;
  double y_on_closure = 0.0;
  std::uint64_t best_mask = 0;
  std::uint64_t mask = 0;
  double best = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto u = static_cast<NodeId>(std::countr_zero(i));
    mask ^= std::uint64_t{1} << u;
    const bool adding = !in_x[u];
    in_x[u] = adding;
    z_on_x += adding ? z[u] : -z[u];
    for (NodeId v : g.predecessors(u)) {
      if (adding) {
        if (covered[v]++ == 0) y_on_closure += y[v];
      } else {
        if (--covered[v] == 0) y_on_closure -= y[v];
      }
    }
    const double excess = z_on_x - y_on_closure;
    if (excess > best) {
      best = excess;
      best_mask = mask;
    }
  }
  return {0, NodeSet::from_mask(n, best_mask), best};
}

LocalityReport check_locality_trace(std::span<const Dist> trace,
                                    const Graph& g, double slack) {
  for (const auto& p : trace)
    QWLIFT_REQUIRE(p.size() == g.size(), ErrorCode::kDimensionMismatch,
                   "trace distribution size ", p.size(), " != graph size ",
                   g.size());
  QWLIFT_REQUIRE(g.size() <= kMaxLocalityScanNodes, ErrorCode::kTooLarge,
                 "exhaustive subset scan limited to ", kMaxLocalityScanNodes,
                 " nodes, got ", g.size());
  for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
    auto v = max_locality_excess(trace[t].weights(), trace[t + 1].weights(), g);
    if (v.excess > slack) {
      v.step = t;
      return {false, std::move(v)};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_header = false;
  Symmetry symmetry = Symmetry::kSymmetric;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    if (!have_header) {
      std::string flag;
      long long count = 0;
      if (!(ls >> count)) {
        QWLIFT_REQUIRE(line.find_first_not_of(" \t\r") == std::string::npos,
                       ErrorCode::kParse, "line ", lineno,
                       ": expected node count");
        continue;
      }
      QWLIFT_REQUIRE(count > 0, ErrorCode::kParse, "line ", lineno,
                     ": node count must be positive");
      n = static_cast<std::size_t>(count);
      if (ls >> flag) {
        QWLIFT_REQUIRE(flag == "directed" || flag == "undirected",
                       ErrorCode::kParse, "line ", lineno,
                       ": unknown header flag '", flag, "'");
        if (flag == "directed") symmetry = Symmetry::kDirected;
      }
      have_header = true;
      continue;
    }
    long long a = 0;
    long long b = 0;
    if (!(ls >> a)) {
      QWLIFT_REQUIRE(line.find_first_not_of(" \t\r") == std::string::npos,
                     ErrorCode::kParse, "line ", lineno, ": expected 'v v''");
      continue;
    }
    QWLIFT_REQUIRE(static_cast<bool>(ls >> b), ErrorCode::kParse, "line ",
                   lineno, ": expected 'v v''");
    std::string rest;
    QWLIFT_REQUIRE(!(ls >> rest), ErrorCode::kParse, "line ", lineno,
                   ": trailing tokens");
    QWLIFT_REQUIRE(a >= 1 && b >= 1 && static_cast<std::size_t>(a) <= n &&
                       static_cast<std::size_t>(b) <= n,
                   ErrorCode::kParse, "line ", lineno, ": node out of range 1..",
                   n);
    edges.emplace_back(static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1));
  }
  QWLIFT_REQUIRE(have_header, ErrorCode::kParse, "missing node count");
  return Graph(n, edges, symmetry);
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream os;
  os << g.size();
  if (g.directed()) os << " directed";
  os << '\n';
  for (const auto& [a, b] : g.edges()) {
    if (a == b) continue;
    if (!g.directed() && b < a) continue;
    os << a + 1 << ' ' << b + 1 << '\n';
  }
  return os.str();
}

}  // namespace qwlift
