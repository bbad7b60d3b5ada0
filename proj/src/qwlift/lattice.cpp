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

#include "qwlift/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qwlift/error.hpp"

namespace qwlift {

namespace {

void require_unit(double x, const char* name) {
  QWLIFT_REQUIRE(std::isfinite(x) && x >= 0.0 && x <= 1.0,
                 ErrorCode::kInvalidArgument, name,
                 " must lie in [0, 1], got ", x);
}

// Shift-after-coin chain over 2d coins: entry ((c', v + e_c'), (c, v)) is
// coin(c', c).
StochMatrix shift_coin_chain(std::size_t m, std::size_t d,
                             const Eigen::MatrixXd& coin, const Graph& g) {
  const std::size_t nodes = g.size();
  const std::size_t coins = 2 * d;
  const LiftedSpace space{coins, nodes};
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = 1; k < d; ++k) stride[k] = stride[k - 1] * m;
  for (NodeId v = 0; v < nodes; ++v) {
    for (std::size_t c2 = 0; c2 < coins; ++c2) {
      const std::size_t axis = c2 / 2;
      const std::size_t coord = (v / stride[axis]) % m;
      const std::size_t moved =
          c2 % 2 == 0 ? (coord + 1) % m : (coord + m - 1) % m;
      const NodeId w = v + (moved - coord) * stride[axis];  // wraps mod 2^64
      for (std::size_t c = 0; c < coins; ++c) {
        const double a = coin(static_cast<Eigen::Index>(c2),
                              static_cast<Eigen::Index>(c));
        if (a == 0.0) continue;
        entries.emplace_back(static_cast<Eigen::Index>(space.index(c2, w)),
                             static_cast<Eigen::Index>(space.index(c, v)), a);
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(space.dim());
  SparseMatrix p(dim, dim);
  p.setFromTriplets(entries.begin(), entries.end());
  return StochMatrix(std::move(p), g, coins);
}

}  // namespace

CMatrix coin_matrix(double alpha, double phi, double theta) {
  require_unit(alpha, "alpha");
  const Complex i(0.0, 1.0);
  const double a = std::sqrt(alpha);
  const double b = std::sqrt(1.0 - alpha);
  CMatrix c(2, 2);
  c << std::exp(-i * phi) * b, std::exp(i * theta) * a,
      -std::exp(-i * theta) * a, std::exp(i * phi) * b;
  return c;
}

KrausOp cycle_unitary(const CycleParams& p) {
  QWLIFT_REQUIRE(p.n >= 2, ErrorCode::kInvalidArgument,
                 "cycle needs N >= 2, got ", p.n);
  const CMatrix coin = coin_matrix(p.alpha, p.phi, p.theta);
  const LiftedSpace space{2, p.n};
  std::vector<Eigen::Triplet<Complex>> entries;
  for (NodeId v = 0; v < p.n; ++v)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t c2 = 0; c2 < 2; ++c2) {
        const Complex a = coin(static_cast<Eigen::Index>(c2),
                               static_cast<Eigen::Index>(c));
        if (a == Complex(0.0, 0.0)) continue;
        const NodeId w = c2 == kCoinPlus ? (v + 1) % p.n : (v + p.n - 1) % p.n;
        entries.emplace_back(static_cast<Eigen::Index>(space.index(c2, w)),
                             static_cast<Eigen::Index>(space.index(c, v)), a);
      }
  const auto dim = static_cast<Eigen::Index>(space.dim());
  KrausOp::Sparse u(dim, dim);
  u.setFromTriplets(entries.begin(), entries.end());
  return KrausOp(std::move(u));
}

StochProcess CycleWalk::process() const {
  return induced_process(channel, coins);
}

CycleWalk cycle_qw(const CycleParams& p) {
  require_unit(p.q, "q");
  QWLIFT_REQUIRE(std::isfinite(p.phi) && std::isfinite(p.theta),
                 ErrorCode::kInvalidArgument, "phases must be finite");
  const LiftedSpace space{2, p.n};
  return CycleWalk{measured_unitary_channel(cycle_unitary(p), p.q, space,
                                            Graph::cycle(p.n)),
                   CoinAssignment::constant(space, kCoinPlus)};
}

LiftedChain cycle_lmc(std::size_t n, double alpha) {
  QWLIFT_REQUIRE(n >= 2, ErrorCode::kInvalidArgument,
                 "cycle needs N >= 2, got ", n);
  require_unit(alpha, "alpha");
  Eigen::MatrixXd coin(2, 2);
  coin << 1.0 - alpha, alpha, alpha, 1.0 - alpha;
  StochMatrix p = shift_coin_chain(n, 1, coin, Graph::cycle(n));
  const LiftedSpace space = p.space();
  return LiftedChain(std::move(p), CoinAssignment::constant(space, kCoinPlus));
}

ClassicalWalk classical_walk(std::size_t n) {
  QWLIFT_REQUIRE(n >= 2, ErrorCode::kInvalidArgument,
                 "cycle needs N >= 2, got ", n);
  const bool lazy = n % 2 == 0;
  const double move = lazy ? 0.25 : 0.5;
  std::vector<Eigen::Triplet<double>> entries;
  for (NodeId v = 0; v < n; ++v) {
    entries.emplace_back(static_cast<Eigen::Index>((v + 1) % n),
                         static_cast<Eigen::Index>(v), move);
    entries.emplace_back(static_cast<Eigen::Index>((v + n - 1) % n),
                         static_cast<Eigen::Index>(v), move);
    if (lazy)
      entries.emplace_back(static_cast<Eigen::Index>(v),
                           static_cast<Eigen::Index>(v), 0.5);
  }
  const auto dim = static_cast<Eigen::Index>(n);
  SparseMatrix p(dim, dim);
  p.setFromTriplets(entries.begin(), entries.end());
  ClassicalWalk out{StochMatrix(std::move(p), Graph::cycle(n)), lazy, {}};
  if (lazy)
    out.warning = "even N is periodic; using the lazy walk (P0 + I) / 2";
  return out;
}

StochProcess hadamard_process() {
  const LiftedSpace space{1, 2};
  CMatrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return induced_process(
      measured_unitary_channel(h, 0.0, space, Graph::complete(2)),
      CoinAssignment::constant(space, 0));
}

NodeId torus_index(const std::vector<std::size_t>& coords, std::size_t m) {
  NodeId v = 0;
  for (std::size_t k = coords.size(); k-- > 0;) {
    QWLIFT_REQUIRE(coords[k] < m, ErrorCode::kInvalidArgument,
                   "torus coordinate ", coords[k], " outside [0, ", m, ")");
    v = v * m + coords[k];
  }
  return v;
}

std::vector<std::size_t> torus_coords(NodeId v, std::size_t m, std::size_t d) {
  std::vector<std::size_t> c(d);
  for (std::size_t k = 0; k < d; ++k) {
    c[k] = v % m;
    v /= m;
  }
  return c;
}

Graph torus_graph(std::size_t m, std::size_t d) {
  QWLIFT_REQUIRE(m >= 2 && d >= 1, ErrorCode::kInvalidArgument,
                 "torus needs M >= 2 and d >= 1");
  std::size_t n = 1;
  for (std::size_t k = 0; k < d; ++k) n *= m;
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) {
    auto c = torus_coords(v, m, d);
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t keep = c[k];
      c[k] = (keep + 1) % m;
      edges.emplace_back(v, torus_index(c, m));
      c[k] = keep;
    }
  }
  return Graph(n, edges);
}

LiftedChain torus_lmc(const TorusParams& p) {
  const double alpha = p.resolved_alpha();
  const std::size_t coins = 2 * p.d;
  QWLIFT_REQUIRE(alpha >= 0.0 &&
                     static_cast<double>(coins) * alpha <= 1.0 + kSumTolerance,
                 ErrorCode::kInvalidArgument, "torus needs 0 <= 2 d alpha <= 1, "
                 "got alpha = ", alpha);
  const Graph g = torus_graph(p.m, p.d);
  Eigen::MatrixXd coin = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(coins), static_cast<Eigen::Index>(coins),
      alpha);
  coin.diagonal().setConstant(1.0 - static_cast<double>(coins - 1) * alpha);
  StochMatrix chain = shift_coin_chain(p.m, p.d, coin, g);
  if (p.resolved_lazy()) {
    SparseMatrix id(chain.matrix().rows(), chain.matrix().cols());
    id.setIdentity();
    SparseMatrix lazy = 0.5 * (chain.matrix() + id);
    chain = StochMatrix(std::move(lazy), g, coins);
  }
  const LiftedSpace space = chain.space();
  return LiftedChain(std::move(chain), CoinAssignment::constant(space, 0));
}

std::size_t contraction_proof_horizon(std::size_t m, std::size_t d) {
  const auto md = static_cast<double>(m);
  const auto dd = static_cast<double>(d);
  return static_cast<std::size_t>(std::ceil(
      3.0 * md * (dd * std::log(dd) + dd) * 32.0 * std::numbers::e * dd));
}

LatticeLemmaReport lattice_lemma_checks(const TorusParams& p,
                                        std::size_t horizon) {
  QWLIFT_REQUIRE(p.m % 2 == 1 || p.resolved_lazy(),
                 ErrorCode::kInvalidArgument,
                 "even M has a parity obstruction; enable the lazy chain");
  const LiftedChain chain = torus_lmc(p);
  const LiftedSpace space = chain.space();
  QWLIFT_REQUIRE(space.dim() <= 4096, ErrorCode::kTooLarge,
                 "exact lattice checks limited to 4096 states, got ",
                 space.dim());
  const auto md = static_cast<double>(p.m);
  const auto dd = static_cast<double>(p.d);

  LatticeLemmaReport r;
  r.m = p.m;
  r.d = p.d;
  r.coin_toss_probability = 2.0 * std::pow(1.0 - 1.0 / md, 2.0 * md - 1.0);
  r.axis_threshold = 1.0 / (16.0 * dd * md);

  // Every atom evolved for 2M steps at once: columns of P^(2M).
  const Eigen::MatrixXd dense = chain.transition().dense();
  Eigen::MatrixXd block = Eigen::MatrixXd::Identity(dense.rows(), dense.cols());
  for (std::size_t s = 0; s < 2 * p.m; ++s) block = dense * block;
  r.axis_min_probability = 1.0;
  std::vector<std::size_t> stride(p.d, 1);
  for (std::size_t k = 1; k < p.d; ++k) stride[k] = stride[k - 1] * p.m;
  for (Eigen::Index col = 0; col < block.cols(); ++col) {
    const std::size_t axis = space.coin_of(static_cast<std::size_t>(col)) / 2;
    std::vector<double> marginal(p.m, 0.0);
    for (Eigen::Index row = 0; row < block.rows(); ++row) {
      const NodeId v = space.node_of(static_cast<std::size_t>(row));
      marginal[(v / stride[axis]) % p.m] += block(row, col);
    }
    r.axis_min_probability = std::min(
        r.axis_min_probability,
        *std::min_element(marginal.begin(), marginal.end()));
  }
  r.axis_mixed = r.axis_min_probability >= r.axis_threshold - kEqualityTolerance;

  // P^T by repeated squaring; its columns are the evolved atoms.
  r.horizon = horizon;
  r.q = (1.0 - 1.0 / std::numbers::e) / 2.0;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(dense.rows(), dense.cols());
  Eigen::MatrixXd base = dense;
  for (std::size_t e = horizon; e > 0; e >>= 1) {
    if (e & 1U) power = base * power;
    if (e > 1) base = base * base;
  }
  const double uniform = 1.0 / static_cast<double>(space.dim());
  r.min_ratio = power.minCoeff() / uniform;
  r.contraction = r.min_ratio >= r.q - kEqualityTolerance;
  return r;
}

double window_tv(std::span<const double> p, NodeId center, std::size_t t) {
  const std::size_t n = p.size();
  QWLIFT_REQUIRE(center < n, ErrorCode::kInvalidArgument, "center ", center,
                 " outside [0, ", n, ")");
  const std::size_t width = std::min(2 * t + 1, n);
  std::vector<double> w(width);
  const std::size_t first = (center + n - (std::min(t, n) % n)) % n;
  double total = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    w[k] = p[(first + k) % n];
    total += w[k];
  }
  const double u = 1.0 / static_cast<double>(width);
  if (total <= 0.0) return 1.0;
  double tv = 0.0;
  for (double x : w) tv += std::abs(x / total - u);
  return 0.5 * tv;
}

std::vector<MultiscaleReport> multiscale_series(std::size_t n,
                                                std::size_t tmax) {
  QWLIFT_REQUIRE(tmax < n, ErrorCode::kInvalidArgument,
                 "multiscale window needs t < N, got t = ", tmax, ", N = ", n);
  const auto nd = static_cast<double>(n);
  const StochProcess qw =
      cycle_qw({n, 0.5, 0.0, 0.0, 1.0 / nd}).process();
  const StochProcess lmc = induced_process(cycle_lmc(n, 1.0 / nd));
  const Dist start = Dist::delta(n, 0);
  auto qc = qw.start(start);
  auto lc = lmc.start(start);
  std::vector<MultiscaleReport> out;
  for (std::size_t t = 0;; ++t) {
    out.push_back({n, t, std::min(2 * t + 1, n), window_tv(qc->marginal(), 0, t),
                   window_tv(lc->marginal(), 0, t)});
    if (t == tmax) break;
    qc->advance();
    lc->advance();
  }
  return out;
}

MultiscaleReport multiscale_experiment(std::size_t n, std::size_t t) {
  return multiscale_series(n, t).back();
}

}  // namespace qwlift
