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

#ifndef QWLIFT_MIXING_HPP_
#define QWLIFT_MIXING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwlift/graph.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

// Why basis starts suffice; copied into every MixingResult.
extern const char* const kBasisReductionNote;

struct TvTrajectory {
  std::vector<double> max_tv;   // entry t, t = 0..horizon
  std::vector<NodeId> argmax;   // start attaining max_tv[t]

  std::size_t horizon() const noexcept {
    return max_tv.empty() ? 0 : max_tv.size() - 1;
  }
};

// Entry t is max over basis p0 of TV(Psi_t[p0], pbar).
TvTrajectory tv_trajectory(const StochProcess& proc, const Dist& pbar,
                           std::size_t horizon);

struct MixingResult {
  double epsilon = 0.0;
  std::optional<std::size_t> tau;  // empty: unresolved within the horizon
  std::size_t horizon = 0;
  NodeId worst_start = 0;
  TvTrajectory trajectory;
  std::string justification;

  bool resolved() const noexcept { return tau.has_value(); }
};

// Smallest tau with max-TV <= eps for every t in [tau, horizon].
MixingResult mixing_time(const TvTrajectory& traj, double eps);
MixingResult mixing_time(const StochProcess& proc, const Dist& pbar,
                         double eps, std::size_t horizon);

struct AmplificationBound {
  std::size_t value = 0;       // tau_bar * multiplier
  std::size_t multiplier = 0;  // ceil(log(1/eps) / log(1/(2 eps0)))
  bool degenerate = false;     // eps >= 1
};

AmplificationBound amplification_bound(std::size_t tau_bar, double eps0,
                                       double eps);

struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
};

// Least squares for log y = exponent * log x + log_prefactor.
PowerFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace qwlift

#endif  // QWLIFT_MIXING_HPP_
