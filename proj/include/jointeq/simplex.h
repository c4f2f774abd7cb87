// Copyright 2026 The jointeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JOINTEQ_SIMPLEX_H_
#define JOINTEQ_SIMPLEX_H_

#include <cstdint>
#include <vector>

namespace jointeq {

// Dense two-phase tableau simplex for small linear programs:
//
//   min c^T x   s.t.   A_ub x <= b_ub,   A_eq x = b_eq,   x >= 0.
//
// Bland's rule guarantees termination; the seed applies a fixed permutation
// to the variable order, which is how degenerate-pivot ties are broken
// differently across seeds while each run stays fully deterministic.
struct LpProblem {
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<double> c;

  int num_vars() const { return static_cast<int>(c.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> x;
  double objective = 0.0;
  // Indices of basic variables per tableau row; structural variables are
  // 0..n-1, slacks of the i-th upper-bound row are n+i.
  std::vector<int> basis;
};

LpResult SolveLp(const LpProblem& problem, uint64_t seed = 0);

}  // namespace jointeq

#endif  // JOINTEQ_SIMPLEX_H_
