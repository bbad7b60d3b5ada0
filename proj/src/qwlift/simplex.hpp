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

#ifndef QWLIFT_SIMPLEX_HPP_
#define QWLIFT_SIMPLEX_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace qwlift {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

// maximize c^T x  subject to  rows,  x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, double>> coeffs;  // sparse (var, a)
    Relation relation = Relation::kLessEqual;
    double rhs = 0.0;
  };

  explicit LinearProgram(std::size_t num_variables)
      : variables(num_variables), objective(num_variables, 0.0) {}

  void add_row(std::vector<std::pair<std::size_t, double>> coeffs,
               Relation relation, double rhs) {
    rows.push_back({std::move(coeffs), relation, rhs});
  }

  std::size_t variables;
  std::vector<double> objective;
  std::vector<Row> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

enum class PivotRule {
  kBland,    // smallest eligible index; never cycles
  kDantzig,  // most negative reduced cost, Bland after a degenerate stall
};

struct SimplexOptions {
  double tolerance = 1e-9;
  PivotRule rule = PivotRule::kBland;
  std::size_t max_iterations = 1'000'000;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

// Dense two-phase tableau simplex.
LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace qwlift

#endif  // QWLIFT_SIMPLEX_HPP_
