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

#ifndef JOINTEQ_LP_SOLVERS_H_
#define JOINTEQ_LP_SOLVERS_H_

#include <cstdint>
#include <vector>

#include "jointeq/normal_form.h"

namespace jointeq {

// A vertex of the polytope {A sigma <= eps, sigma >= 0, sum(sigma) = 1}.
struct VertexSolution {
  JointDistribution sigma;
  // Active-row indices at the vertex. Rows [0, R) refer to the constraint
  // system's deviation rows; row R + j is the nonnegativity bound
  // sigma_j >= 0. A basic feasible solution keeps at least |A| - 1 of these
  // active (plus the probability equality).
  std::vector<int> basis;
  double objective_value = 0.0;
};

// Minimizes cost^T sigma over the (C)CE polytope of `cs`. The seed breaks
// degenerate-pivot ties (different seeds may land on different optimal
// vertices of a tied face). Throws SolverError(kInfeasible) when the
// polytope is empty and SolverError(kUnbounded) on the impossible-unbounded
// internal error.
VertexSolution SimplexSolve(const ConstraintSystem& cs,
                            const std::vector<double>& cost,
                            uint64_t seed = 0);

// Maximum-welfare point: maximizes sum_p E_sigma[G_p].
JointDistribution SolveMaxWelfare(const ConstraintSystem& cs,
                                  const NormalFormGame& game,
                                  uint64_t seed = 0);

// Randomized maximum welfare: first maximizes welfare, then optimizes a
// seeded Gaussian cost over the (near-)optimal face, so welfare ties are
// resolved differently across seeds.
JointDistribution SolveRandomMaxWelfare(const ConstraintSystem& cs,
                                        const NormalFormGame& game,
                                        uint64_t seed);

// Random vertex: minimizes a seeded uniform direction from the unit sphere.
JointDistribution SolveRandomVertex(const ConstraintSystem& cs,
                                    uint64_t seed);

}  // namespace jointeq

#endif  // JOINTEQ_LP_SOLVERS_H_
