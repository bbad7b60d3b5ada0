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

#include "qwlift/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "qwlift/error.hpp"

namespace qwlift {

FlowNetwork build_flow_network(const Dist& y, const Dist& z, const Graph& g) {
  QWLIFT_REQUIRE(y.size() == g.size() && z.size() == g.size(),
                 ErrorCode::kDimensionMismatch, "flow network over ",
                 g.size(), " nodes given distributions of size ", y.size(),
                 " and ", z.size());
  FlowNetwork net;
  net.nodes = g.size();
  net.source_capacity = y.vec();
  net.sink_capacity = z.vec();
  net.middle = g.edges();
  return net;
}

namespace {

// Dense residual network; vertex layout W = [0, n), W' = [n, 2n), s, r.
class Residual {
 public:
  explicit Residual(std::size_t vertices)
      : n_(vertices), cap_(vertices * vertices, 0.0),
        flow_(vertices * vertices, 0.0), adj_(vertices) {}

  void add_arc(std::size_t u, std::size_t w, double capacity) {
    if (cap_[u * n_ + w] == 0.0 && cap_[w * n_ + u] == 0.0) {
      adj_[u].push_back(w);
      adj_[w].push_back(u);
    }
    cap_[u * n_ + w] += std::max(capacity, 0.0);
  }

  double residual(std::size_t u, std::size_t w) const {
    return cap_[u * n_ + w] - flow_[u * n_ + w];
  }
  double flow(std::size_t u, std::size_t w) const {
    return flow_[u * n_ + w];
  }

  double run(std::size_t s, std::size_t r) {
    double total = 0.0;
    std::vector<std::size_t> parent(n_);
    constexpr auto kNone = std::numeric_limits<std::size_t>::max();
    for (;;) {
      std::fill(parent.begin(), parent.end(), kNone);
      parent[s] = s;
      std::deque<std::size_t> queue{s};
      while (!queue.empty() && parent[r] == kNone) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t w : adj_[u])
          if (parent[w] == kNone && residual(u, w) > kFlowTolerance) {
            parent[w] = u;
            queue.push_back(w);
          }
      }
      if (parent[r] == kNone) return total;
      double bottleneck = std::numeric_limits<double>::infinity();
      for (std::size_t w = r; w != s; w = parent[w])
        bottleneck = std::min(bottleneck, residual(parent[w], w));
      for (std::size_t w = r; w != s; w = parent[w]) {
        flow_[parent[w] * n_ + w] += bottleneck;
        flow_[w * n_ + parent[w]] -= bottleneck;
      }
      total += bottleneck;
    }
  }

 private:
  std::size_t n_;
  std::vector<double> cap_;
  std::vector<double> flow_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
  const std::size_t n = net.nodes;
  const std::size_t s = 2 * n;
  const std::size_t r = 2 * n + 1;
  Residual res(2 * n + 2);
  for (std::size_t v = 0; v < n; ++v) {
    res.add_arc(s, v, net.source_capacity[v]);
    res.add_arc(n + v, r, net.sink_capacity[v]);
  }
  for (const auto& [v, w] : net.middle) res.add_arc(v, n + w, 1.0);

  FlowResult out;
  out.value = res.run(s, r);
  out.middle_flow.reserve(net.middle.size());
  for (const auto& [v, w] : net.middle)
    out.middle_flow.push_back(std::max(res.flow(v, n + w), 0.0));

  std::vector<double> balance(2 * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    balance[v] += res.flow(s, v);
    balance[n + v] -= res.flow(n + v, r);
  }
  for (std::size_t k = 0; k < net.middle.size(); ++k) {
    const auto& [v, w] = net.middle[k];
    const double f = res.flow(v, n + w);
    balance[v] -= f;
    balance[n + w] += f;
  }
  for (double b : balance)
    out.conservation_residual = std::max(out.conservation_residual,
                                         std::abs(b));
  return out;
}

bool flow_feasible(const FlowResult& flow) {
  return flow.value >= 1.0 - kSumTolerance;
}

StochMatrix extract_bridge(const FlowNetwork& net, const FlowResult& flow,
                           const Graph& g) {
  QWLIFT_REQUIRE(net.nodes == g.size() &&
                     flow.middle_flow.size() == net.middle.size(),
                 ErrorCode::kDimensionMismatch,
                 "flow does not belong to this network");
  QWLIFT_REQUIRE(flow_feasible(flow), ErrorCode::kInfeasible,
                 "max-flow value ", flow.value,
                 " < 1: the pair violates the locality inequality");
  const std::size_t n = net.nodes;
  std::vector<double> column_sum(n, 0.0);
  for (std::size_t k = 0; k < net.middle.size(); ++k)
    column_sum[net.middle[k].first] += flow.middle_flow[k];

  // A column whose source mass is numerically absent is left free.
  auto is_free = [&](NodeId v) {
    return net.source_capacity[v] <= 0.0 || column_sum[v] <= 0.0;
  };
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t k = 0; k < net.middle.size(); ++k) {
    const auto& [v, w] = net.middle[k];
    if (is_free(v) || flow.middle_flow[k] <= 0.0) continue;
    entries.emplace_back(static_cast<Eigen::Index>(w),
                         static_cast<Eigen::Index>(v),
                         flow.middle_flow[k] / column_sum[v]);
  }
  for (NodeId v = 0; v < n; ++v)
    if (is_free(v))
      entries.emplace_back(static_cast<Eigen::Index>(v),
                           static_cast<Eigen::Index>(v), 1.0);
  const auto dim = static_cast<Eigen::Index>(n);
  SparseMatrix p(dim, dim);
  p.setFromTriplets(entries.begin(), entries.end());
  return StochMatrix(std::move(p), g);
}

StochMatrix solve_bridge(const Dist& y, const Dist& z, const Graph& g) {
  const FlowNetwork net = build_flow_network(y, z, g);
  return extract_bridge(net, max_flow(net), g);
}

BridgeSequence bridge_sequence(const StochProcess& proc, const Dist& p0,
                               std::size_t horizon) {
  QWLIFT_REQUIRE(horizon >= 1, ErrorCode::kInvalidArgument,
                 "bridge sequence needs horizon >= 1");
  BridgeSequence seq{p0, proc.description(), {}, {}};
  seq.steps.reserve(horizon);
  auto cursor = proc.start(p0);
  Dist prev = p0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    cursor->advance();
    Dist next = to_dist(cursor->marginal());
    const FlowNetwork net = build_flow_network(prev, next, proc.graph());
    const FlowResult flow = max_flow(net);
    if (!flow_feasible(flow))
      detail::fail(ErrorCode::kInfeasible, "step ", t,
                   " is not locally reachable: max-flow value ", flow.value);
    seq.steps.push_back(extract_bridge(net, flow, proc.graph()));
    seq.flow_values.push_back(flow.value);
    prev = std::move(next);
  }
  return seq;
}

double bridge_residual(const BridgeSequence& seq, const StochProcess& proc) {
  auto cursor = proc.start(seq.p0);
  std::vector<double> p = seq.p0.vec();
  double worst = 0.0;
  for (const StochMatrix& step : seq.steps) {
    p = step.apply(p);
    cursor->advance();
    const auto& target = cursor->marginal();
    double err = 0.0;
    for (std::size_t v = 0; v < p.size(); ++v) err += std::abs(p[v] - target[v]);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace qwlift
