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

#ifndef QWLIFT_LMC_HPP_
#define QWLIFT_LMC_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qwlift/graph.hpp"
#include "qwlift/process.hpp"
#include "qwlift/quantum_walk.hpp"

namespace qwlift {

// Column convention: entry (to, from), p_{t+1} = P p_t.
using SparseMatrix = Eigen::SparseMatrix<double>;

// Column-stochastic matrix over `coins` x V whose nonzeros respect the
// lifted locality of `graph`: (i -> j) needs (node(i), node(j)) in E.
class StochMatrix {
 public:
  StochMatrix() = default;
  StochMatrix(SparseMatrix m, Graph graph, std::size_t coins = 1);
  static StochMatrix from_dense(const Eigen::MatrixXd& m, Graph graph,
                                std::size_t coins = 1);

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(m_.rows());
  }
  std::size_t coins() const noexcept { return coins_; }
  const Graph& graph() const noexcept { return graph_; }
  LiftedSpace space() const noexcept { return {coins_, graph_.size()}; }
  const SparseMatrix& matrix() const noexcept { return m_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  double operator()(std::size_t to, std::size_t from) const {
    return m_.coeff(static_cast<Eigen::Index>(to),
                    static_cast<Eigen::Index>(from));
  }

  std::vector<double> apply(std::span<const double> p) const;

 private:
  SparseMatrix m_;
  Graph graph_;
  std::size_t coins_ = 1;
};

// b applied after a. Locality mask is the composed two-step graph.
StochMatrix multiply(const StochMatrix& b, const StochMatrix& a);

StochMatrix identity_chain(const Graph& g, std::size_t coins = 1);

bool is_irreducible(const StochMatrix& p);

struct StationaryOptions {
  double tolerance = kEqualityTolerance;  // on ||P pbar - pbar||_1
  std::size_t max_iterations = 1'000'000;
};

// Power iteration on (P + I) / 2; requires irreducibility.
Dist stationary(const StochMatrix& p, const StationaryOptions& opts = {});

class LiftedChain {
 public:
  LiftedChain(StochMatrix transition, CoinAssignment init);

  const StochMatrix& transition() const noexcept { return transition_; }
  const CoinAssignment& init() const noexcept { return init_; }
  const Graph& base_graph() const noexcept { return transition_.graph(); }
  LiftedSpace space() const noexcept { return transition_.space(); }

  // F[p] over C x V.
  std::vector<double> lift(const Dist& p) const;
  // f: marginal over V of a joint vector.
  std::vector<double> marginalize(std::span<const double> joint) const;

 private:
  StochMatrix transition_;
  CoinAssignment init_;
};

Dist lmc_evolve(const LiftedChain& chain, const Dist& p0, std::size_t t);

// Joint distribution P^t phat0 over C x V (diagnostics).
std::vector<double> joint_evolve(const LiftedChain& chain,
                                 std::span<const double> joint0,
                                 std::size_t t);

// M_k = sqrt(P(k)) |c',v'><c,v| for every nonzero entry of P.
KrausChannel as_channel(const LiftedChain& chain);

StochProcess induced_process(const LiftedChain& chain);
StochProcess markov_process(const StochMatrix& p);

struct InducedChain {
  StochMatrix chain;   // P_V over V
  Dist joint_stationary;
  Dist stationary;     // pbar(v) = phat(C x v)
  // Nodes with zero stationary mass; their columns are set to delta_v.
  std::vector<NodeId> zero_mass_nodes;
};

InducedChain induced_chain(const LiftedChain& chain);

}  // namespace qwlift

#endif  // QWLIFT_LMC_HPP_
