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

#ifndef QWLIFT_LATTICE_HPP_
#define QWLIFT_LATTICE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwlift/graph.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/process.hpp"
#include "qwlift/quantum_walk.hpp"

namespace qwlift {

// Coin index 0 is "+" (shift v -> v + 1), index 1 is "-".
inline constexpr std::size_t kCoinPlus = 0;
inline constexpr std::size_t kCoinMinus = 1;

struct CycleParams {
  std::size_t n = 2;
  double alpha = 0.5;
  double phi = 0.0;
  double theta = 0.0;
  double q = 0.0;
};

// [[e^{-i phi} sqrt(1-a), e^{i theta} sqrt(a)],
//  [-e^{-i theta} sqrt(a), e^{i phi} sqrt(1-a)]]
CMatrix coin_matrix(double alpha, double phi, double theta);

// U = S (C x I_N) on {+,-} x Z_N.
KrausOp cycle_unitary(const CycleParams& p);

struct CycleWalk {
  KrausChannel channel;
  CoinAssignment coins;  // c_v = + for every v

  StochProcess process() const;
};

CycleWalk cycle_qw(const CycleParams& p);

// P = S (Sbar x I_N) with Sbar = [[1-a, a], [a, 1-a]].
LiftedChain cycle_lmc(std::size_t n, double alpha);

struct ClassicalWalk {
  StochMatrix chain;
  bool lazy = false;
  std::optional<std::string> warning;
};

// (P+ + P-) / 2; even N gets (P0 + I) / 2 to break periodicity.
ClassicalWalk classical_walk(std::size_t n);

// Coinless two-node walk with U_H = (sigma_x + sigma_z) / sqrt(2), q = 0.
StochProcess hadamard_process();

struct TorusParams {
  std::size_t m = 3;
  std::size_t d = 1;
  std::optional<double> alpha;  // default 1 / (2 d M)
  std::optional<bool> lazy;     // default: M even

  double resolved_alpha() const {
    return alpha ? *alpha : 1.0 / (2.0 * static_cast<double>(d * m));
  }
  bool resolved_lazy() const { return lazy ? *lazy : m % 2 == 0; }
};

// Mixed radix: (i_1, ..., i_d) -> sum_k i_k M^(k-1), zero-based.
NodeId torus_index(const std::vector<std::size_t>& coords, std::size_t m);
std::vector<std::size_t> torus_coords(NodeId v, std::size_t m, std::size_t d);
Graph torus_graph(std::size_t m, std::size_t d);

// Coins 2k = +_k and 2k + 1 = -_k; initial coin +_1 at every node.
LiftedChain torus_lmc(const TorusParams& p);

// ceil(3 M (d ln d + d) 32 e d).
std::size_t contraction_proof_horizon(std::size_t m, std::size_t d);

struct LatticeLemmaReport {
  std::size_t m = 0;
  std::size_t d = 0;
  // Coin-toss closed form 2 (1 - 1/M)^(2M - 1) against 1/8.
  double coin_toss_probability = 0.0;
  // min over atoms and n of P[i_k = n] after 2M steps, k the start axis.
  double axis_min_probability = 0.0;
  double axis_threshold = 0.0;  // 1 / (16 d M)
  bool axis_mixed = false;
  std::size_t horizon = 0;  // T
  double q = 0.0;           // (1 - 1/e) / 2
  // min over atoms and states of p_T / pbar on C x V.
  double min_ratio = 0.0;
  bool contraction = false;
};

LatticeLemmaReport lattice_lemma_checks(const TorusParams& p,
                                        std::size_t horizon);

struct MultiscaleReport {
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t window = 0;  // number of nodes in the arc
  double qw_tv = 0.0;
  double lmc_tv = 0.0;
};

// TV between p restricted to the arc of 2t + 1 nodes around `center`
// (renormalized) and the uniform distribution on that arc.
double window_tv(std::span<const double> p, NodeId center, std::size_t t);

// QW (alpha = 1/2, q = 1/N) against LMC (alpha = 1/N), both from node 0.
MultiscaleReport multiscale_experiment(std::size_t n, std::size_t t);
std::vector<MultiscaleReport> multiscale_series(std::size_t n,
                                                std::size_t tmax);

}  // namespace qwlift

#endif  // QWLIFT_LATTICE_HPP_
