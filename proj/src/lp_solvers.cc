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

#include "jointeq/lp_solvers.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "jointeq/check.h"
#include "jointeq/errors.h"
#include "jointeq/rng.h"
#include "jointeq/simplex.h"

namespace jointeq {
namespace {

constexpr double kActiveRowTol = 1e-8;
constexpr double kWelfareFaceSlack = 1e-9;

LpProblem BuildPolytopeLp(const ConstraintSystem& cs,
                          const std::vector<double>& cost) {
  const int64_t n = cs.num_joint_actions();
  JEQ_CHECK_EQ(static_cast<int64_t>(cost.size()), n);
  LpProblem p;
  p.c = cost;
  const int64_t rows = cs.num_rows();
  p.a_ub.reserve(rows);
  p.b_ub.reserve(rows);
  for (int64_t i = 0; i < rows; ++i) {
    p.a_ub.push_back(DenseRow(cs.rows, i));
    p.b_ub.push_back(cs.epsilon[i]);
  }
  p.a_eq.emplace_back(n, 1.0);
  p.b_eq.push_back(1.0);
  return p;
}

// Copy of `cs` with one extra dense inequality row appended (tagged with a
// sentinel deviation so the labels stay aligned).
ConstraintSystem WithExtraRow(const ConstraintSystem& cs,
                              const std::vector<double>& row, double rhs) {
  ConstraintSystem out;
  out.kind = cs.kind;
  out.epsilon = cs.epsilon;
  out.row_index = cs.row_index;
  SparseBuilder builder(cs.num_joint_actions());
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k) {
      builder.Add(cs.rows.col[k], cs.rows.val[k]);
    }
    builder.FinishRow();
  }
  for (int64_t j = 0; j < static_cast<int64_t>(row.size()); ++j) {
    if (row[j] != 0.0) builder.Add(j, row[j]);
  }
  builder.FinishRow();
  out.rows = builder.Take();
  out.epsilon.push_back(rhs);
  out.row_index.push_back(DeviationTag{-1, -1, -1});
  return out;
}

std::vector<double> GaussianCost(int64_t n, SeededSampler* sampler,
                                 bool normalize) {
  std::vector<double> cost(n);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (double& c : cost) {
      c = sampler->Gaussian();
      norm_sq += c * c;
    }
  } while (normalize && norm_sq < 1e-24);
  if (normalize) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& c : cost) c *= inv;
  }
  return cost;
}

}  // namespace

VertexSolution SimplexSolve(const ConstraintSystem& cs,
                            const std::vector<double>& cost, uint64_t seed) {
  const LpProblem problem = BuildPolytopeLp(cs, cost);
  const LpResult lp = SolveLp(problem, seed);
  if (lp.status == LpStatus::kInfeasible) {
    throw SolverError(ErrorCode::kInfeasible,
                      "the requested polytope is empty (epsilon below the "
                      "minimum feasible epsilon)");
  }
  if (lp.status == LpStatus::kUnbounded) {
    throw SolverError(ErrorCode::kUnbounded,
                      "LP over a probability simplex cannot be unbounded; "
                      "this is an internal error");
  }

  VertexSolution out;
  out.objective_value = lp.objective;
  out.sigma = ClampAndNormalize(lp.x);

  const int64_t rows = cs.num_rows();
  const int64_t n = cs.num_joint_actions();
  std::vector<double> slack(rows, 0.0);
  if (rows > 0) MultiplySerial(cs.rows, lp.x.data(), slack.data());
  for (int64_t i = 0; i < rows; ++i) {
    if (slack[i] >= cs.epsilon[i] - kActiveRowTol * (1.0 + std::abs(cs.epsilon[i]))) {
      out.basis.push_back(static_cast<int>(i));
    }
  }
  for (int64_t j = 0; j < n; ++j) {
    if (lp.x[j] <= 1e-10) out.basis.push_back(static_cast<int>(rows + j));
  }
  return out;
}

JointDistribution SolveMaxWelfare(const ConstraintSystem& cs,
                                  const NormalFormGame& game, uint64_t seed) {
  std::vector<double> cost = WelfareVector(game);
  for (double& c : cost) c = -c;
  return SimplexSolve(cs, cost, seed).sigma;
}

JointDistribution SolveRandomMaxWelfare(const ConstraintSystem& cs,
                                        const NormalFormGame& game,
                                        uint64_t seed) {
  const std::vector<double> welfare = WelfareVector(game);
  std::vector<double> cost(welfare.size());
  for (size_t j = 0; j < welfare.size(); ++j) cost[j] = -welfare[j];
  const VertexSolution mw = SimplexSolve(cs, cost, seed);
  const double best_welfare = -mw.objective_value;

  // Pin welfare to its optimum (up to a hair of slack for degeneracy) and
  // re-optimize a random direction over that face.
  const ConstraintSystem face =
      WithExtraRow(cs, cost, -(best_welfare - kWelfareFaceSlack));
  SeededSampler sampler(seed);
  const std::vector<double> random_cost =
      GaussianCost(cs.num_joint_actions(), &sampler, /*normalize=*/false);
  return SimplexSolve(face, random_cost, seed).sigma;
}

JointDistribution SolveRandomVertex(const ConstraintSystem& cs,
                                    uint64_t seed) {
  SeededSampler sampler(seed);
  const std::vector<double> cost =
      GaussianCost(cs.num_joint_actions(), &sampler, /*normalize=*/true);
  return SimplexSolve(cs, cost, seed).sigma;
}

}  // namespace jointeq
