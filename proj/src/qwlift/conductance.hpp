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

#ifndef QWLIFT_CONDUCTANCE_HPP_
#define QWLIFT_CONDUCTANCE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qwlift/graph.hpp"
#include "qwlift/lmc.hpp"
#include "qwlift/mixing.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

// Exhaustive cut scans are limited to this many states.
inline constexpr std::size_t kMaxConductanceNodes = 26;

struct CutReport {
  NodeSet cut;
  double flow = 0.0;  // Q_P(X^c, X): stationary mass leaving X in one step
  double mass = 0.0;  // pbar(X)
  double phi = 0.0;
};

// Q_P(X^c, X) = sum_{v in X, v' not in X} P(v', v) pbar(v). No checks.
double ergodic_flow(const StochMatrix& p, std::span<const double> pbar,
                    const NodeSet& x);

// Phi_X(P). Requires P pbar = pbar and 0 < pbar(X) <= 1/2.
double phi_cut(const StochMatrix& p, const Dist& pbar, const NodeSet& x);
CutReport cut_report(const StochMatrix& p, const Dist& pbar,
                     const NodeSet& x);

struct ChainConductance {
  double phi = 0.0;
  CutReport witness;
  std::vector<std::string> warnings;
};

// Minimum of Phi_X over all cuts with 0 < pbar(X) <= 1/2. Exhaustive.
ChainConductance phi_chain(const StochMatrix& p, const Dist& pbar);

struct GraphConductanceOptions {
  std::size_t cuts_per_round = 32;
  std::size_t max_rounds = 500;
  double separation_tolerance = 1e-10;
};

struct GraphConductance {
  double phi = 0.0;             // LP optimum t
  StochMatrix witness;          // optimal local pbar-invariant chain
  double witness_phi = 0.0;     // Phi(witness), exhaustive
  CutReport witness_cut;        // cut attaining witness_phi
  std::size_t cuts_used = 0;
  std::size_t rounds = 0;
  std::size_t lp_iterations = 0;
  std::vector<std::string> warnings;
};

// max t over local, column-stochastic P with P pbar = pbar and
// Q_P(X^c, X) >= t pbar(X) on every qualifying cut. Cut constraints are
// generated lazily by an exhaustive separation scan.
GraphConductance graph_conductance(const Graph& g, const Dist& pbar,
                                   const GraphConductanceOptions& opts = {});

struct LowerBoundReport {
  bool applicable = false;        // local and pbar-invariant
  bool local = false;
  bool locality_traced = false;   // false: structural locality assumed
  bool invariant = false;
  double phi = 0.0;               // graph conductance
  double bound = 0.0;             // 1 / (4 phi)
  MixingResult mixing;            // at eps = 1/4
  bool conclusive = false;
  bool holds = false;             // tau(1/4) >= bound - 1
  std::string note;
};

// Largest node count for which locality is traced exhaustively.
inline constexpr std::size_t kMaxLocalityTraceNodes = 12;

LowerBoundReport mixing_lower_bound_check(
    const StochProcess& proc, const Dist& pbar, std::size_t horizon,
    std::optional<double> phi = std::nullopt);

struct EscapeReport {
  double phi_x = 0.0;
  std::vector<double> escape;  // P_{X^c}[P^t pbar_X]
  std::vector<double> tv;      // ||P^t pbar_X - pbar_X||_TV
  bool escape_below_tv = true;
  bool tv_below_bound = true;  // tv <= t * phi_x
  double max_violation = 0.0;

  bool holds() const noexcept { return escape_below_tv && tv_below_bound; }
};

EscapeReport escape_bound_check(const StochMatrix& p, const Dist& pbar,
                                const NodeSet& x, std::size_t tmax);

}  // namespace qwlift

#endif  // QWLIFT_CONDUCTANCE_HPP_
