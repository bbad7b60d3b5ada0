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

#ifndef QWLIFT_GRAPH_HPP_
#define QWLIFT_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwlift {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;  // (from, to): mass flows from -> to

inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kEqualityTolerance = 1e-12;
// Largest node count for which 2^n subset scans are attempted.
inline constexpr std::size_t kMaxLocalityScanNodes = 20;

enum class Symmetry { kSymmetric, kDirected };

// Locality substrate. Every node carries a self-loop; undirected input is
// stored as the symmetric closure of the given pairs.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::span<const Edge> edges,
        Symmetry symmetry = Symmetry::kSymmetric);
  Graph(std::size_t n, std::initializer_list<Edge> edges,
        Symmetry symmetry = Symmetry::kSymmetric)
      : Graph(n, std::span<const Edge>(edges.begin(), edges.size()),
              symmetry) {}

  static Graph complete(std::size_t n);
  static Graph cycle(std::size_t n);
  static Graph path(std::size_t n);

  std::size_t size() const noexcept { return successors_.size(); }
  bool directed() const noexcept { return directed_; }
  bool has_edge(NodeId from, NodeId to) const;

  // Sorted, self-loop included.
  std::span<const NodeId> successors(NodeId v) const;
  std::span<const NodeId> predecessors(NodeId v) const;

  std::size_t edge_count() const noexcept { return edge_count_; }
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  bool directed_ = false;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<NodeId>> successors_;
  std::vector<std::vector<NodeId>> predecessors_;
};

// Probability vector over V or over C x V.
class Dist {
 public:
  Dist() = default;
  explicit Dist(std::vector<double> weights);

  static Dist delta(std::size_t n, std::size_t at);
  static Dist uniform(std::size_t n);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<double>& vec() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : bits_(universe, false) {}
  NodeSet(std::size_t universe, std::initializer_list<NodeId> members);

  static NodeSet from_mask(std::size_t universe, std::uint64_t mask);
  static NodeSet all(std::size_t universe);

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(NodeId v) const;
  void insert(NodeId v);
  void erase(NodeId v);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<NodeId> members() const;
  NodeSet complement() const;
  // Only valid for universe <= 64.
  std::uint64_t mask() const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<bool> bits_;
};

// Two-step graph: (u, w) whenever (u, v) in first and (v, w) in second.
Graph compose(const Graph& first, const Graph& second);

// B(X) = {v not in X : (v, v') in E for some v' in X}.
NodeSet neighborhood(const Graph& g, const NodeSet& x);

double mass(std::span<const double> p, const NodeSet& x);

double tv_distance(std::span<const double> p, std::span<const double> q);
inline double tv_distance(const Dist& p, const Dist& q) {
  return tv_distance(p.weights(), q.weights());
}

struct LocalityViolation {
  std::size_t step = 0;  // violation between trace[step] and trace[step + 1]
  NodeSet cut;
  double excess = 0.0;   // P_X[z] - P_X[y] - P_B(X)[y]
};

struct LocalityReport {
  bool ok = true;
  LocalityViolation first;  // meaningful when !ok
};

// Largest value over X of P_X[z] - P_{X u B(X)}[y], with its cut. Exhaustive.
LocalityViolation max_locality_excess(std::span<const double> y,
                                      std::span<const double> z,
                                      const Graph& g);

LocalityReport check_locality_trace(std::span<const Dist> trace,
                                    const Graph& g,
                                    double slack = kSumTolerance);

// Edge-list text: first line "n" (optionally "n directed"), then one
// 1-indexed "v v'" pair per line. '#' starts a comment.
Graph parse_edge_list(std::string_view text);
std::string format_edge_list(const Graph& g);

}  // namespace qwlift

#endif  // QWLIFT_GRAPH_HPP_
