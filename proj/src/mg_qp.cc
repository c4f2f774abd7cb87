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

// Primal active-set solver for the max-Gini QP:
//
//   min 1/2 sigma^T diag(r) sigma   s.t.  A sigma <= eps, sigma >= 0,
//                                          r^T sigma = 1.
//
// Dense linear algebra throughout — this engine exists as an independent
// cross-check for the dual projected-gradient engine and as the exact
// workhorse for small systems, not as the scalable path.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "jointeq/check.h"
#include "jointeq/errors.h"
#include "jointeq/mg_solver.h"
#include "jointeq/simplex.h"

namespace jointeq {
namespace {

constexpr double kMultiplierTol = 1e-9;
constexpr double kStepTol = 1e-13;
constexpr double kSamePointTol = 1e-11;

struct WorkingSet {
  std::vector<int64_t> a_rows;  // active inequality rows
  std::vector<int64_t> bounds;  // active sigma_j >= 0 bounds
};

}  // namespace

MgSolution SolveActiveSetQp(const ConstraintSystem& cs,
                            const std::vector<double>& epsilon,
                            const SolverConfig& config,
                            const std::vector<double>* copy_counts) {
  const int64_t n = cs.num_joint_actions();
  const int64_t rows = cs.num_rows();
  JEQ_CHECK_EQ(static_cast<int64_t>(epsilon.size()), rows);
  JEQ_CHECK_LE(static_cast<double>(rows) * static_cast<double>(n), 5e6);

  std::vector<double> r(n, 1.0);
  if (copy_counts != nullptr) {
    JEQ_CHECK_EQ(copy_counts->size(), static_cast<size_t>(n));
    r = *copy_counts;
  }
  double total = 0.0;
  for (double v : r) total += v;

  MgSolution out;
  out.epsilon_used = epsilon;

  // Dense copies.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k) {
      a(i, cs.rows.col[k]) = cs.rows.val[k];
    }
  }
  Eigen::VectorXd eps(rows);
  for (int64_t i = 0; i < rows; ++i) eps(i) = epsilon[i];
  Eigen::VectorXd rv(n), sqrt_r(n), inv_sqrt_r(n);
  for (int64_t j = 0; j < n; ++j) {
    rv(j) = r[j];
    sqrt_r(j) = std::sqrt(r[j]);
    inv_sqrt_r(j) = 1.0 / sqrt_r(j);
  }

  // Feasible vertex via the LP engine (zero cost).
  Eigen::VectorXd sigma(n);
  {
    LpProblem feas;
    feas.c.assign(n, 0.0);
    for (int64_t i = 0; i < rows; ++i) {
      feas.a_ub.push_back(DenseRow(cs.rows, i));
      feas.b_ub.push_back(epsilon[i]);
    }
    feas.a_eq.push_back(r);
    feas.b_eq.push_back(1.0);
    const LpResult lp = SolveLp(feas);
    if (lp.status == LpStatus::kInfeasible) {
      throw SolverError(ErrorCode::kInfeasible,
                        "the requested polytope is empty (epsilon below the "
                        "minimum feasible epsilon)");
    }
    JEQ_CHECK_TRUE(lp.status == LpStatus::kOptimal);
    for (int64_t j = 0; j < n; ++j) sigma(j) = lp.x[j];
  }

  // Working set = constraints active at the start vertex.
  WorkingSet ws;
  {
    const Eigen::VectorXd slack = a * sigma - eps;
    for (int64_t i = 0; i < rows; ++i) {
      if (slack(i) >= -1e-9) ws.a_rows.push_back(i);
    }
    for (int64_t j = 0; j < n; ++j) {
      if (sigma(j) <= 1e-11) ws.bounds.push_back(j);
    }
  }

  const int64_t max_steps =
      std::min<int64_t>(config.max_iters, 500 + 5 * (rows + n));
  Eigen::VectorXd x(n), y(n), nu;
  int64_t step_count = 0;
  bool done = false;
  DualState dual;
  dual.alpha.assign(rows, 0.0);
  dual.beta.assign(n, 0.0);

  while (step_count < max_steps) {
    ++step_count;
    const int64_t m = 1 + static_cast<int64_t>(ws.a_rows.size()) +
                      static_cast<int64_t>(ws.bounds.size());
    // Equality subproblem in y = diag(sqrt r) x coordinates:
    //   min 1/2 ||y||^2  s.t.  M y = d.
    Eigen::MatrixXd mmat = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd d(m);
    mmat.row(0) = sqrt_r.transpose();  // r^T x = 1
    d(0) = 1.0;
    int64_t row_at = 1;
    for (int64_t i : ws.a_rows) {
      mmat.row(row_at) = a.row(i).cwiseProduct(inv_sqrt_r.transpose());
      d(row_at) = eps(i);
      ++row_at;
    }
    for (int64_t j : ws.bounds) {
      mmat(row_at, j) = inv_sqrt_r(j);
      d(row_at) = 0.0;
      ++row_at;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(mmat);
    y = cod.solve(d);
    x = y.cwiseProduct(inv_sqrt_r);

    if ((x - sigma).lpNorm<Eigen::Infinity>() <= kSamePointTol) {
      // Stationary on the working set: check multiplier signs.
      // Stationarity reads M^T nu = -y in the scaled coordinates.
      nu = -(cod.pseudoInverse().transpose() * y);
      double worst = -kMultiplierTol;
      int64_t worst_pos = -1;  // position within the working set
      bool worst_is_bound = false;
      for (size_t k = 0; k < ws.a_rows.size(); ++k) {
        const double alpha_k = nu(1 + static_cast<int64_t>(k));
        if (alpha_k < worst) {
          worst = alpha_k;
          worst_pos = static_cast<int64_t>(k);
          worst_is_bound = false;
        }
      }
      const int64_t bounds_base = 1 + static_cast<int64_t>(ws.a_rows.size());
      for (size_t k = 0; k < ws.bounds.size(); ++k) {
        const double beta_k = -nu(bounds_base + static_cast<int64_t>(k));
        if (beta_k < worst) {
          worst = beta_k;
          worst_pos = static_cast<int64_t>(k);
          worst_is_bound = true;
        }
      }
      if (worst_pos < 0) {
        // All multipliers admissible: optimal.
        dual.lambda = nu(0);
        for (size_t k = 0; k < ws.a_rows.size(); ++k) {
          dual.alpha[ws.a_rows[k]] =
              std::max(0.0, nu(1 + static_cast<int64_t>(k)));
        }
        for (size_t k = 0; k < ws.bounds.size(); ++k) {
          dual.beta[ws.bounds[k]] =
              std::max(0.0, -nu(bounds_base + static_cast<int64_t>(k)));
        }
        done = true;
        break;
      }
      if (worst_is_bound) {
        ws.bounds.erase(ws.bounds.begin() + worst_pos);
      } else {
        ws.a_rows.erase(ws.a_rows.begin() + worst_pos);
      }
      continue;
    }

    // Step toward the subproblem optimum until a blocking constraint.
    const Eigen::VectorXd delta = x - sigma;
    double t = 1.0;
    int64_t blocking = -1;  // < rows: inequality row; >= rows: bound row - rows
    const Eigen::VectorXd a_delta = a * delta;
    const Eigen::VectorXd slack = eps - a * sigma;
    std::vector<char> in_a(rows, 0), in_b(n, 0);
    for (int64_t i : ws.a_rows) in_a[i] = 1;
    for (int64_t j : ws.bounds) in_b[j] = 1;
    for (int64_t i = 0; i < rows; ++i) {
      if (in_a[i] || a_delta(i) <= kStepTol) continue;
      const double ti = slack(i) / a_delta(i);
      if (ti < t) {
        t = ti;
        blocking = i;
      }
    }
    for (int64_t j = 0; j < n; ++j) {
      if (in_b[j] || delta(j) >= -kStepTol) continue;
      const double tj = sigma(j) / (-delta(j));
      if (tj < t) {
        t = tj;
        blocking = rows + j;
      }
    }
    if (t > 0.0) sigma += std::max(t, 0.0) * delta;
    if (blocking >= 0) {
      if (blocking < rows) {
        ws.a_rows.push_back(blocking);
        std::sort(ws.a_rows.begin(), ws.a_rows.end());
      } else {
        ws.bounds.push_back(blocking - rows);
        std::sort(ws.bounds.begin(), ws.bounds.end());
      }
    } else {
      sigma = x;  // full step, no blocking constraint
    }
  }

  if (!done) {
    throw SolverError(ErrorCode::kIterationLimit,
                      "active-set QP: no optimum within " +
                          std::to_string(max_steps) + " steps");
  }

  out.raw_sigma.assign(sigma.data(), sigma.data() + n);
  out.sigma = ClampAndNormalize(out.raw_sigma, 1e-7);
  out.dual = std::move(dual);
  out.iterations = step_count;
  out.kkt = KktCertificate(cs, epsilon, out.raw_sigma, out.dual, copy_counts);
  double sq = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    sq += r[j] * out.sigma.probs[j] * out.sigma.probs[j];
  }
  out.gini = 1.0 - sq;
  return out;
}

}  // namespace jointeq
