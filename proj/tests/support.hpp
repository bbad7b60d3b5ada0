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

// Seeded generators shared by the unit, property and acceptance tests.

#ifndef QWLIFT_TESTS_SUPPORT_HPP_
#define QWLIFT_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "qwlift/graph.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/quantum_walk.hpp"

namespace qwlift::testing {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Random spanning tree plus extra edges with probability `extra`.
inline Graph random_connected_graph(Rng& rng, std::size_t n,
                                    double extra = 0.3) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(pick(rng, 0, v - 1), v);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (uniform01(rng) < extra) edges.emplace_back(u, v);
  return Graph(n, edges);
}

// Strictly positive distribution with entries in [0.5, 1.5] before scaling.
inline Dist random_dist(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = 0.5 + uniform01(rng);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return Dist(std::move(w));
}

// Column-stochastic matrix with random weights on every allowed entry.
inline StochMatrix random_local_chain(Rng& rng, const Graph& g) {
  const std::size_t n = g.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) {
    double s = 0.0;
    for (NodeId w : g.successors(v)) {
      m(w, v) = 0.05 + uniform01(rng);
      s += m(w, v);
    }
    m.col(v) /= s;
  }
  return StochMatrix::from_dense(m, g);
}

// Metropolis chain: reversible with respect to pbar, hence invariant.
inline StochMatrix random_invariant_chain(Rng& rng, const Graph& g,
                                          const Dist& pbar) {
  const std::size_t n = g.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId u : g.successors(v))
      if (u > v) w(u, v) = w(v, u) = 0.2 + uniform01(rng);
  std::size_t degree = 1;
  for (NodeId v = 0; v < n; ++v)
    degree = std::max(degree, g.successors(v).size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) {
    double out = 0.0;
    for (NodeId u : g.successors(v)) {
      if (u == v) continue;
      m(u, v) = w(u, v) / (1.3 * static_cast<double>(degree)) *
                std::min(1.0, pbar[u] / pbar[v]);
      out += m(u, v);
    }
    m(v, v) = 1.0 - out;
  }
  return StochMatrix::from_dense(m, g);
}

// Random chain over coins x V, dense inside the lifted locality pattern.
inline LiftedChain random_lifted_chain(Rng& rng, const Graph& g,
                                       std::size_t coins) {
  const LiftedSpace space{coins, g.size()};
  const auto dim = static_cast<Eigen::Index>(space.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    double s = 0.0;
    for (NodeId w : g.successors(space.node_of(i)))
      for (std::size_t c = 0; c < coins; ++c) {
        const auto j = static_cast<Eigen::Index>(space.index(c, w));
        m(j, static_cast<Eigen::Index>(i)) = 0.05 + uniform01(rng);
        s += m(j, static_cast<Eigen::Index>(i));
      }
    m.col(static_cast<Eigen::Index>(i)) /= s;
  }
  std::vector<std::size_t> init(g.size());
  for (auto& c : init) c = pick(rng, 0, coins - 1);
  return LiftedChain(StochMatrix::from_dense(m, g, coins),
                     CoinAssignment(space, std::move(init)));
}

// Random k x k unitary: Q factor of a complex Gaussian matrix.
inline CMatrix random_unitary(Rng& rng, Eigen::Index k) {
  CMatrix a(k, k);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      a(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(k, k);
}

// Local channel sum_j w_j Swap_j D_j where D_j rotates the coin at each
// node and Swap_j exchanges the nodes of a random matching of edges. The
// node marginal of the uniform start stays uniform.
inline KrausChannel random_local_channel(Rng& rng, const Graph& g,
                                         std::size_t coins,
                                         std::size_t terms) {
  const LiftedSpace space{coins, g.size()};
  const auto dim = static_cast<Eigen::Index>(space.dim());
  std::vector<double> w(terms);
  for (double& x : w) x = 0.2 + uniform01(rng);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<KrausOp> ops;
  for (std::size_t k = 0; k < terms; ++k) {
    CMatrix d = CMatrix::Zero(dim, dim);
    for (NodeId v = 0; v < g.size(); ++v) {
      const CMatrix u = random_unitary(rng, static_cast<Eigen::Index>(coins));
      for (std::size_t a = 0; a < coins; ++a)
        for (std::size_t b = 0; b < coins; ++b)
          d(static_cast<Eigen::Index>(space.index(a, v)),
            static_cast<Eigen::Index>(space.index(b, v))) =
              u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    std::vector<NodeId> partner(g.size());
    std::iota(partner.begin(), partner.end(), 0);
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges())
      if (u < v) edges.emplace_back(u, v);
    std::shuffle(edges.begin(), edges.end(), rng);
    for (const auto& [u, v] : edges)
      if (partner[u] == u && partner[v] == v && uniform01(rng) < 0.7) {
        partner[u] = v;
        partner[v] = u;
      }
    CMatrix swap = CMatrix::Zero(dim, dim);
    for (std::size_t c = 0; c < coins; ++c)
      for (NodeId v = 0; v < g.size(); ++v)
        swap(static_cast<Eigen::Index>(space.index(c, partner[v])),
             static_cast<Eigen::Index>(space.index(c, v))) = 1.0;
    ops.push_back(KrausOp::from_dense(std::sqrt(w[k] / s) * swap * d));
  }
  return KrausChannel(space, g, std::move(ops));
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l1_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m += std::abs(a[i] - b[i]);
  return m;
}

}  // namespace qwlift::testing

#endif  // QWLIFT_TESTS_SUPPORT_HPP_
