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

#include "qwlift/mixing.hpp"

#include <cmath>

#include "qwlift/error.hpp"

namespace qwlift {

const char* const kBasisReductionNote =
    "worst case over initial distributions evaluated on basis states: "
    "Psi_t is linear and TV to pbar is convex, so the maximum over the "
    "simplex is attained at a vertex; tau is certified only up to the "
    "horizon";

TvTrajectory tv_trajectory(const StochProcess& proc, const Dist& pbar,
                           std::size_t horizon) {
  const std::size_t n = proc.num_nodes();
  QWLIFT_REQUIRE(pbar.size() == n, ErrorCode::kDimensionMismatch,
                 "target over ", pbar.size(), " nodes, process over ", n);
  TvTrajectory traj;
  traj.max_tv.assign(horizon + 1, -1.0);
  traj.argmax.assign(horizon + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    auto cursor = proc.start(Dist::delta(n, v));
    for (std::size_t t = 0;; ++t) {
      const double tv = tv_distance(cursor->marginal(), pbar.weights());
      if (tv > traj.max_tv[t]) {
        traj.max_tv[t] = tv;
        traj.argmax[t] = v;
      }
      if (t == horizon) break;
      cursor->advance();
    }
  }
  return traj;
}

MixingResult mixing_time(const TvTrajectory& traj, double eps) {
  QWLIFT_REQUIRE(eps > 0.0 && eps <= 1.0, ErrorCode::kInvalidArgument,
                 "epsilon must lie in (0, 1], got ", eps);
  MixingResult out;
  out.epsilon = eps;
  out.horizon = traj.horizon();
  out.trajectory = traj;
  out.justification = kBasisReductionNote;
  // Scan backwards for the last time the threshold is exceeded.
  std::size_t tau = 0;
  bool exceeded = false;
  for (std::size_t t = traj.max_tv.size(); t-- > 0;)
    if (traj.max_tv[t] > eps + kEqualityTolerance) {
      tau = t + 1;
      exceeded = true;
      break;
    }
  if (!exceeded) {
    out.tau = 0;
    out.worst_start = traj.argmax.empty() ? 0 : traj.argmax[0];
  } else if (tau <= out.horizon) {
    out.tau = tau;
    out.worst_start = traj.argmax[tau - 1];
  } else {
    out.worst_start = traj.argmax[out.horizon];
  }
  return out;
}

MixingResult mixing_time(const StochProcess& proc, const Dist& pbar,
                         double eps, std::size_t horizon) {
  QWLIFT_REQUIRE(horizon >= 1, ErrorCode::kInvalidArgument,
                 "mixing time needs horizon >= 1");
  return mixing_time(tv_trajectory(proc, pbar, horizon), eps);
}

AmplificationBound amplification_bound(std::size_t tau_bar, double eps0,
                                       double eps) {
  QWLIFT_REQUIRE(eps0 > 0.0 && eps0 < 0.5, ErrorCode::kInvalidArgument,
                 "amplification needs 0 < eps0 < 1/2, got ", eps0);
  QWLIFT_REQUIRE(eps > 0.0, ErrorCode::kInvalidArgument,
                 "epsilon must be positive, got ", eps);
  AmplificationBound out;
  if (eps >= 1.0) {
    out.degenerate = true;
    return out;
  }
  // The small offset keeps exact ratios such as log 4 / log 2 from rounding
  // up to the next integer.
  const double ratio = std::log(1.0 / eps) / std::log(1.0 / (2.0 * eps0));
  out.multiplier = static_cast<std::size_t>(std::ceil(ratio - 1e-12));
  out.value = tau_bar * out.multiplier;
  return out;
}

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  QWLIFT_REQUIRE(x.size() == y.size() && x.size() >= 2,
                 ErrorCode::kInvalidArgument,
                 "power-law fit needs at least two paired samples");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    QWLIFT_REQUIRE(x[i] > 0.0 && y[i] > 0.0, ErrorCode::kInvalidArgument,
                   "power-law fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  QWLIFT_REQUIRE(denom > 0.0, ErrorCode::kInvalidArgument,
                 "power-law fit needs distinct x values");
  PowerFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.log_prefactor = (sy - fit.exponent * sx) / n;
  return fit;
}

}  // namespace qwlift
