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

#ifndef QWLIFT_PROCESS_HPP_
#define QWLIFT_PROCESS_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qwlift/graph.hpp"

namespace qwlift {

// Forward-only evaluation of p_t = Psi_t[p0] for one initial condition.
class ProcessCursor {
 public:
  virtual ~ProcessCursor() = default;
  virtual std::size_t time() const = 0;
  virtual const std::vector<double>& marginal() const = 0;
  virtual void advance() = 0;
};

enum class ProcessKind {
  kQuantumWalk,
  kLiftedChain,
  kMarkovChain,
  kCesaro,
  kCustom,
};

const char* to_string(ProcessKind kind);

// A family of stochastic linear maps Psi_t over the nodes of a graph.
// Immutable; copies share the evaluator.
class StochProcess {
 public:
  using CursorFactory =
      std::function<std::unique_ptr<ProcessCursor>(const Dist&)>;
  // One time step applied to a node distribution: returns Psi_{t+1}[p0]
  // given Psi_t[p0] and t. Only for Markovian (possibly time-dependent)
  // processes.
  using StepFunction =
      std::function<std::vector<double>(const std::vector<double>&,
                                        std::size_t)>;

  StochProcess(ProcessKind kind, Graph graph, CursorFactory factory,
               std::string description = {});

  static StochProcess from_steps(Graph graph, StepFunction step,
                                 std::string description = {});

  ProcessKind kind() const noexcept { return state_->kind; }
  const Graph& graph() const noexcept { return state_->graph; }
  std::size_t num_nodes() const noexcept { return state_->graph.size(); }
  const std::string& description() const noexcept {
    return state_->description;
  }

  std::unique_ptr<ProcessCursor> start(const Dist& p0) const;
  Dist evolve(const Dist& p0, std::size_t t) const;
  // Entries t = 0..horizon.
  std::vector<Dist> trajectory(const Dist& p0, std::size_t horizon) const;

 private:
  struct State {
    ProcessKind kind;
    Graph graph;
    CursorFactory factory;
    std::string description;
  };
  std::shared_ptr<const State> state_;
};

// Uniform time average (1/(t+1)) sum_{s<=t} Psi_s.
StochProcess cesaro(const StochProcess& proc);

// True iff TV(Psi_t[pbar], pbar) <= tol for all t <= horizon.
bool check_invariance(const StochProcess& proc, const Dist& pbar,
                      std::size_t horizon, double tol = kSumTolerance);

// Clamps roundoff negatives (>= -1e-9) to zero and wraps as a Dist.
Dist to_dist(const std::vector<double>& weights);

}  // namespace qwlift

#endif  // QWLIFT_PROCESS_HPP_
