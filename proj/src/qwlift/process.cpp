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

#include "qwlift/process.hpp"

#include <algorithm>
#include <cmath>

#include "qwlift/error.hpp"

namespace qwlift {

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::kQuantumWalk:
      return "quantum-walk";
    case ProcessKind::kLiftedChain:
      return "lifted-chain";
    case ProcessKind::kMarkovChain:
      return "markov-chain";
    case ProcessKind::kCesaro:
      return "cesaro";
    case ProcessKind::kCustom:
      return "custom";
  }
  return "unknown";
}

StochProcess::StochProcess(ProcessKind kind, Graph graph,
                           CursorFactory factory, std::string description)
    : state_(std::make_shared<const State>(State{
          kind, std::move(graph), std::move(factory), std::move(description)})) {
  QWLIFT_REQUIRE(static_cast<bool>(state_->factory),
                 ErrorCode::kInvalidArgument, "process needs an evaluator");
}

namespace {

class StepCursor final : public ProcessCursor {
 public:
  StepCursor(std::shared_ptr<const StochProcess::StepFunction> step,
             const Dist& p0)
      : step_(std::move(step)), current_(p0.vec()) {}

  std::size_t time() const override { return t_; }
  const std::vector<double>& marginal() const override { return current_; }
  void advance() override {
    auto next = (*step_)(current_, t_);
    QWLIFT_REQUIRE(next.size() == current_.size(),
                   ErrorCode::kDimensionMismatch,
                   "step function changed the state dimension");
    current_ = std::move(next);
    ++t_;
  }

 private:
  std::shared_ptr<const StochProcess::StepFunction> step_;
  std::vector<double> current_;
  std::size_t t_ = 0;
};

}  // namespace

StochProcess StochProcess::from_steps(Graph graph, StepFunction step,
                                      std::string description) {
  auto shared = std::make_shared<const StepFunction>(std::move(step));
  return StochProcess(
      ProcessKind::kCustom, std::move(graph),
      [shared](const Dist& p0) -> std::unique_ptr<ProcessCursor> {
        return std::make_unique<StepCursor>(shared, p0);
      },
      std::move(description));
}

std::unique_ptr<ProcessCursor> StochProcess::start(const Dist& p0) const {
  QWLIFT_REQUIRE(p0.size() == num_nodes(), ErrorCode::kDimensionMismatch,
                 "initial distribution over ", p0.size(),
                 " nodes, process has ", num_nodes());
  return state_->factory(p0);
}

Dist StochProcess::evolve(const Dist& p0, std::size_t t) const {
  auto cursor = start(p0);
  while (cursor->time() < t) cursor->advance();
  return to_dist(cursor->marginal());
}

std::vector<Dist> StochProcess::trajectory(const Dist& p0,
                                           std::size_t horizon) const {
  std::vector<Dist> out;
  out.reserve(horizon + 1);
  auto cursor = start(p0);
  out.push_back(to_dist(cursor->marginal()));
  while (cursor->time() < horizon) {
    cursor->advance();
    out.push_back(to_dist(cursor->marginal()));
  }
  return out;
}

namespace {

class CesaroCursor final : public ProcessCursor {
 public:
  explicit CesaroCursor(std::unique_ptr<ProcessCursor> inner)
      : inner_(std::move(inner)),
        sum_(inner_->marginal()),
        average_(sum_) {}

  std::size_t time() const override { return inner_->time(); }
  const std::vector<double>& marginal() const override { return average_; }
  void advance() override {
    inner_->advance();
    const auto& p = inner_->marginal();
    const double count = static_cast<double>(inner_->time() + 1);
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      sum_[i] += p[i];
      average_[i] = sum_[i] / count;
    }
  }

 private:
  std::unique_ptr<ProcessCursor> inner_;
  std::vector<double> sum_;
  std::vector<double> average_;
};

}  // namespace

StochProcess cesaro(const StochProcess& proc) {
  return StochProcess(
      ProcessKind::kCesaro, proc.graph(),
      [proc](const Dist& p0) -> std::unique_ptr<ProcessCursor> {
        return std::make_unique<CesaroCursor>(proc.start(p0));
      },
      "cesaro(" + proc.description() + ")");
}

bool check_invariance(const StochProcess& proc, const Dist& pbar,
                      std::size_t horizon, double tol) {
  auto cursor = proc.start(pbar);
  for (;;) {
    if (tv_distance(cursor->marginal(), pbar.weights()) > tol) return false;
    if (cursor->time() >= horizon) return true;
    cursor->advance();
  }
}

Dist to_dist(const std::vector<double>& weights) {
  std::vector<double> w(weights);
  double sum = 0.0;
  for (double& x : w) {
    if (x < 0.0) {
      QWLIFT_REQUIRE(x >= -kSumTolerance, ErrorCode::kInvariant,
                     "negative probability ", x);
      x = 0.0;
    }
    sum += x;
  }
  QWLIFT_REQUIRE(std::abs(sum - 1.0) <= kSumTolerance, ErrorCode::kInvariant,
                 "probabilities sum to ", sum);
  return Dist(std::move(w));
}

}  // namespace qwlift
