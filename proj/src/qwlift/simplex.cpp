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

#include "qwlift/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwlift/error.hpp"

namespace qwlift {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
// Consecutive degenerate pivots before the Dantzig rule hands over to Bland.
constexpr std::size_t kStallLimit = 50;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, kNone) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const {
    return a_[i * (n_ + 1) + j];
  }
  double& rhs(std::size_t i) { return at(i, n_); }
  double& cost(std::size_t j) { return at(m_, j); }  // reduced cost row
  double value() const { return at(m_, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      double* row = &a_[i * (n_ + 1)];
      const double* prow = &a_[r * (n_ + 1)];
      for (std::size_t j = 0; j <= n_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Sets the reduced-cost row for maximizing sum_j obj[j] x_j.
  void set_objective(const std::vector<double>& obj) {
    for (std::size_t j = 0; j <= n_; ++j) cost(j) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) cost(j) = -obj[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = obj[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) cost(j) += cb * at(i, j);
    }
  }

  // Runs primal simplex on the current objective. `allowed[j]` gates
  // entering columns.
  LpStatus optimize(const std::vector<bool>& allowed,
                    const SimplexOptions& opts, std::size_t& iterations) {
    const double tol = opts.tolerance;
    std::size_t stall = 0;
    while (iterations < opts.max_iterations) {
      const bool bland = opts.rule == PivotRule::kBland || stall >= kStallLimit;
      std::size_t enter = kNone;
      double best = -tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j] || cost(j) >= -tol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (cost(j) < best) {
          best = cost(j);
          enter = j;
        }
      }
      if (enter == kNone) return LpStatus::kOptimal;

      std::size_t leave = kNone;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double aij = at(i, enter);
        if (aij <= tol) continue;
        const double r = std::max(rhs(i), 0.0) / aij;
        // Ties within tolerance go to the smallest basic index.
        if (leave == kNone || r < ratio - tol) {
          ratio = r;
          leave = i;
        } else if (r <= ratio + tol && basis_[i] < basis_[leave]) {
          ratio = std::min(ratio, r);
          leave = i;
        }
      }
      if (leave == kNone) return LpStatus::kUnbounded;
      stall = ratio <= tol ? stall + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
    return LpStatus::kIterationLimit;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  const std::size_t m = lp.rows.size();
  const std::size_t nv = lp.variables;
  QWLIFT_REQUIRE(lp.objective.size() == nv, ErrorCode::kDimensionMismatch,
                 "objective has ", lp.objective.size(), " entries for ", nv,
                 " variables");

  // Normalize to b >= 0, then count slack and artificial columns.
  std::vector<double> sign(m, 1.0);
  std::vector<Relation> rel(m);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    rel[i] = row.relation;
    // Homogeneous >= rows flip to <= so their slack starts basic.
    if (row.rhs < 0.0 ||
        (row.rhs == 0.0 && rel[i] == Relation::kGreaterEqual)) {
      sign[i] = -1.0;
      if (rel[i] == Relation::kLessEqual) rel[i] = Relation::kGreaterEqual;
      else if (rel[i] == Relation::kGreaterEqual) rel[i] = Relation::kLessEqual;
    }
    if (rel[i] != Relation::kEqual) ++slacks;
    if (rel[i] != Relation::kLessEqual) ++artificials;
  }
  const std::size_t n = nv + slacks + artificials;
  Tableau tab(m, n);
  std::size_t next_slack = nv;
  std::size_t next_art = nv + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (const auto& [j, a] : row.coeffs) {
      QWLIFT_REQUIRE(j < nv, ErrorCode::kInvalidArgument, "row ", i,
                     " references variable ", j, " of ", nv);
      tab.at(i, j) += sign[i] * a;
    }
    tab.rhs(i) = sign[i] * row.rhs;
    if (rel[i] == Relation::kLessEqual) {
      tab.at(i, next_slack) = 1.0;
      tab.basis()[i] = next_slack++;
    } else {
      if (rel[i] == Relation::kGreaterEqual) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      tab.basis()[i] = next_art++;
    }
  }

  LpResult result;
  std::vector<bool> allowed(n, true);
  if (artificials > 0) {
    std::vector<double> phase1(n, 0.0);
    for (std::size_t j = nv + slacks; j < n; ++j) phase1[j] = -1.0;
    tab.set_objective(phase1);
    const LpStatus s = tab.optimize(allowed, opts, result.iterations);
    if (s == LpStatus::kIterationLimit) {
      result.status = s;
      return result;
    }
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      scale = std::max(scale, std::abs(tab.rhs(i)));
    if (tab.value() < -opts.tolerance * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible. Rows
    // where that is impossible are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < nv + slacks) continue;
      for (std::size_t j = 0; j < nv + slacks; ++j)
        if (std::abs(tab.at(i, j)) > opts.tolerance) {
          tab.pivot(i, j);
          break;
        }
    }
    for (std::size_t j = nv + slacks; j < n; ++j) allowed[j] = false;
  }

  std::vector<double> phase2(n, 0.0);
  for (std::size_t j = 0; j < nv; ++j) phase2[j] = lp.objective[j];
  tab.set_objective(phase2);
  result.status = tab.optimize(allowed, opts, result.iterations);
  result.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] < nv) result.x[tab.basis()[i]] = tab.rhs(i);
  result.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j)
    result.objective += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace qwlift
