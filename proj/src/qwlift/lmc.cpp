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

#include "qwlift/lmc.hpp"

#include <cmath>
#include <deque>

#include "qwlift/error.hpp"

namespace qwlift {

StochMatrix::StochMatrix(SparseMatrix m, Graph graph, std::size_t coins)
    : m_(std::move(m)), graph_(std::move(graph)), coins_(coins) {
  QWLIFT_REQUIRE(coins_ >= 1, ErrorCode::kInvalidArgument,
                 "coin count must be >= 1");
  const std::size_t n = coins_ * graph_.size();
  QWLIFT_REQUIRE(static_cast<std::size_t>(m_.rows()) == n &&
                     static_cast<std::size_t>(m_.cols()) == n,
                 ErrorCode::kDimensionMismatch, "stochastic matrix is ",
                 m_.rows(), "x", m_.cols(), ", expected side ", n);
  m_.prune(0.0, 0.0);
  m_.makeCompressed();
  const std::size_t nodes = graph_.size();
  for (Eigen::Index j = 0; j < m_.outerSize(); ++j) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(m_, j); it; ++it) {
      QWLIFT_REQUIRE(std::isfinite(it.value()) && it.value() >= 0.0,
                     ErrorCode::kInvalidArgument, "negative entry ",
                     it.value(), " at (", it.row(), ",", j, ")");
      const auto from = static_cast<std::size_t>(j) % nodes;
      const auto to = static_cast<std::size_t>(it.row()) % nodes;
      QWLIFT_REQUIRE(graph_.has_edge(from, to), ErrorCode::kInvalidArgument,
                     "transition ", j, " -> ", it.row(),
                     " crosses non-edge (", from, ",", to, ")");
      sum += it.value();
    }
    QWLIFT_REQUIRE(std::abs(sum - 1.0) <= kSumTolerance,
                   ErrorCode::kInvalidArgument, "column ", j, " sums to ",
                   sum);
  }
}

StochMatrix StochMatrix::from_dense(const Eigen::MatrixXd& m, Graph graph,
                                    std::size_t coins) {
  return StochMatrix(m.sparseView(), std::move(graph), coins);
}

std::vector<double> StochMatrix::apply(std::span<const double> p) const {
  QWLIFT_REQUIRE(p.size() == size(), ErrorCode::kDimensionMismatch,
                 "vector of size ", p.size(), " applied to matrix of side ",
                 size());
  Eigen::Map<const Eigen::VectorXd> x(p.data(),
                                      static_cast<Eigen::Index>(p.size()));
  std::vector<double> out(size());
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(size())) =
      m_ * x;
  return out;
}

StochMatrix multiply(const StochMatrix& b, const StochMatrix& a) {
  QWLIFT_REQUIRE(a.coins() == b.coins() && a.graph().size() == b.graph().size(),
                 ErrorCode::kDimensionMismatch,
                 "multiplying chains on different spaces");
  SparseMatrix prod = b.matrix() * a.matrix();
  return StochMatrix(std::move(prod), compose(a.graph(), b.graph()),
                     a.coins());
}

StochMatrix identity_chain(const Graph& g, std::size_t coins) {
  const auto n = static_cast<Eigen::Index>(coins * g.size());
  SparseMatrix id(n, n);
  id.setIdentity();
  return StochMatrix(std::move(id), g, coins);
}

bool is_irreducible(const StochMatrix& p) {
  const std::size_t n = p.size();
  if (n == 0) return false;
  const SparseMatrix& m = p.matrix();
  std::vector<std::vector<std::size_t>> forward(n);
  std::vector<std::vector<std::size_t>> backward(n);
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      forward[static_cast<std::size_t>(j)].push_back(
          static_cast<std::size_t>(it.row()));
      backward[static_cast<std::size_t>(it.row())].push_back(
          static_cast<std::size_t>(j));
    }
  auto reaches_all = [n](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          queue.push_back(w);
        }
    }
    return count == n;
  };
  return reaches_all(forward) && reaches_all(backward);
}

Dist stationary(const StochMatrix& p, const StationaryOptions& opts) {
  QWLIFT_REQUIRE(is_irreducible(p), ErrorCode::kInvalidArgument,
                 "stationary distribution requires an irreducible chain");
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y(n);
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    y.noalias() = p.matrix() * x;
    if ((y - x).lpNorm<1>() <= opts.tolerance)
      return Dist(std::vector<double>(x.data(), x.data() + n));
    x = 0.5 * (x + y);
    if (iter % 1024 == 1023) x /= x.sum();
  }
  detail::fail(ErrorCode::kNotConverged,
               "power iteration did not converge in ", opts.max_iterations,
               " iterations");
}

// ---------------------------------------------------------------------------

LiftedChain::LiftedChain(StochMatrix transition, CoinAssignment init)
    : transition_(std::move(transition)), init_(std::move(init)) {
  QWLIFT_REQUIRE(init_.space() == transition_.space(),
                 ErrorCode::kDimensionMismatch,
                 "coin assignment and transition matrix disagree on C x V");
}

std::vector<double> LiftedChain::lift(const Dist& p) const {
  const LiftedSpace s = space();
  QWLIFT_REQUIRE(p.size() == s.nodes, ErrorCode::kDimensionMismatch,
                 "distribution over ", p.size(), " nodes, chain has ",
                 s.nodes);
  std::vector<double> joint(s.dim(), 0.0);
  for (NodeId v = 0; v < s.nodes; ++v) joint[s.index(init_[v], v)] = p[v];
  return joint;
}

std::vector<double> LiftedChain::marginalize(
    std::span<const double> joint) const {
  const LiftedSpace s = space();
  QWLIFT_REQUIRE(joint.size() == s.dim(), ErrorCode::kDimensionMismatch,
                 "joint vector of size ", joint.size(), ", expected ",
                 s.dim());
  std::vector<double> p(s.nodes, 0.0);
  for (std::size_t i = 0; i < joint.size(); ++i) p[s.node_of(i)] += joint[i];
  return p;
}

std::vector<double> joint_evolve(const LiftedChain& chain,
                                 std::span<const double> joint0,
                                 std::size_t t) {
  QWLIFT_REQUIRE(joint0.size() == chain.space().dim(),
                 ErrorCode::kDimensionMismatch, "joint vector of size ",
                 joint0.size(), ", expected ", chain.space().dim());
  const auto n = static_cast<Eigen::Index>(joint0.size());
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(joint0.data(), n);
  Eigen::VectorXd y(n);
  for (std::size_t s = 0; s < t; ++s) {
    y.noalias() = chain.transition().matrix() * x;
    x.swap(y);
  }
  return std::vector<double>(x.data(), x.data() + n);
}

Dist lmc_evolve(const LiftedChain& chain, const Dist& p0, std::size_t t) {
  return to_dist(chain.marginalize(joint_evolve(chain, chain.lift(p0), t)));
}

KrausChannel as_channel(const LiftedChain& chain) {
  const SparseMatrix& m = chain.transition().matrix();
  const auto dim = static_cast<Eigen::Index>(chain.space().dim());
  std::vector<KrausOp> ops;
  ops.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      KrausOp::Sparse k(dim, dim);
      k.insert(it.row(), j) = Complex(std::sqrt(it.value()), 0.0);
      ops.emplace_back(std::move(k));
    }
  return KrausChannel(chain.space(), chain.base_graph(), std::move(ops));
}

namespace {

class ChainCursor final : public ProcessCursor {
 public:
  ChainCursor(std::shared_ptr<const LiftedChain> chain, const Dist& p0)
      : chain_(std::move(chain)),
        joint_(Eigen::Map<const Eigen::VectorXd>(
            chain_->lift(p0).data(),
            static_cast<Eigen::Index>(chain_->space().dim()))),
        scratch_(joint_.size()),
        marginal_(p0.vec()) {}

  std::size_t time() const override { return t_; }
  const std::vector<double>& marginal() const override { return marginal_; }
  void advance() override {
    scratch_.noalias() = chain_->transition().matrix() * joint_;
    joint_.swap(scratch_);
    const LiftedSpace s = chain_->space();
    std::fill(marginal_.begin(), marginal_.end(), 0.0);
    for (Eigen::Index i = 0; i < joint_.size(); ++i)
      marginal_[s.node_of(static_cast<std::size_t>(i))] += joint_(i);
    ++t_;
  }

 private:
  std::shared_ptr<const LiftedChain> chain_;
  Eigen::VectorXd joint_;
  Eigen::VectorXd scratch_;
  std::vector<double> marginal_;
  std::size_t t_ = 0;
};

}  // namespace

StochProcess induced_process(const LiftedChain& chain) {
  auto shared = std::make_shared<const LiftedChain>(chain);
  return StochProcess(
      chain.space().coins == 1 ? ProcessKind::kMarkovChain
                               : ProcessKind::kLiftedChain,
      chain.base_graph(),
      [shared](const Dist& p0) -> std::unique_ptr<ProcessCursor> {
        return std::make_unique<ChainCursor>(shared, p0);
      },
      "lifted chain");
}

StochProcess markov_process(const StochMatrix& p) {
  QWLIFT_REQUIRE(p.coins() == 1, ErrorCode::kInvalidArgument,
                 "markov_process expects a chain over V; use a LiftedChain");
  return induced_process(
      LiftedChain(p, CoinAssignment::constant(p.space(), 0)));
}

InducedChain induced_chain(const LiftedChain& chain) {
  const LiftedSpace s = chain.space();
  Dist joint = stationary(chain.transition());
  std::vector<double> pbar = chain.marginalize(joint.weights());
  std::vector<NodeId> zero_mass;
  for (NodeId v = 0; v < s.nodes; ++v)
    if (pbar[v] <= 0.0) zero_mass.push_back(v);

  const SparseMatrix& m = chain.transition().matrix();
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
    const NodeId from = s.node_of(static_cast<std::size_t>(j));
    if (pbar[from] <= 0.0) continue;
    const double weight = joint[static_cast<std::size_t>(j)] / pbar[from];
    for (SparseMatrix::InnerIterator it(m, j); it; ++it)
      entries.emplace_back(
          static_cast<Eigen::Index>(s.node_of(static_cast<std::size_t>(it.row()))),
          static_cast<Eigen::Index>(from), weight * it.value());
  }
  for (NodeId v : zero_mass)
    entries.emplace_back(static_cast<Eigen::Index>(v),
                         static_cast<Eigen::Index>(v), 1.0);
  const auto n = static_cast<Eigen::Index>(s.nodes);
  SparseMatrix pv(n, n);
  pv.setFromTriplets(entries.begin(), entries.end());
  return {StochMatrix(std::move(pv), chain.base_graph()), std::move(joint),
          to_dist(pbar), std::move(zero_mass)};
}

}  // namespace qwlift
