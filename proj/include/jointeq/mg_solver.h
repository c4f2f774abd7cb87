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

#ifndef JOINTEQ_MG_SOLVER_H_
#define JOINTEQ_MG_SOLVER_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "jointeq/normal_form.h"

namespace jointeq {

// Maximum-Gini (C)CE solver: maximizes 1 - sigma^T sigma over the polytope
// {A sigma <= eps, sigma >= 0, sum(sigma) = 1}. The objective is strictly
// concave, so sigma is unique; dual variables need not be.
//
// All entry points take an optional `copy_counts` vector r (one entry per
// joint action, default all-ones). It generalizes the problem to the
// repeat-reduced form: objective 1 - sigma^T diag(r) sigma, probability
// constraint r^T sigma = 1, uniform point b = e / sum(r). Constraint rows
// must already carry the matching copy multiplicities folded into A.

enum class EpsilonMode {
  kFixed,           // caller-supplied scalar (or per-row vector)
  kMaxAb,           // eps = max(A b): the uniform distribution is optimal
  kHalfMaxAb,       // eps = max(A b) / 2
  kFullSupportMin,  // bisection: smallest eps whose solution has full support
  kMinEpsilon,      // LP: smallest feasible scalar eps, then the QP there
};

enum class SupportMode {
  kGeneral,      // sigma >= 0 enforced through beta duals
  kFullSupport,  // assume interior sigma; beta omitted (scalable form)
};

enum class SolveEngine {
  kDualProjectedGradient,  // default: projected gradient on the dual
  kPrimalActiveSet,        // dense active-set QP; cross-check oracle
};

struct SolverConfig {
  EpsilonMode epsilon_mode = EpsilonMode::kFixed;
  // Scalar epsilon for kFixed; ignored when epsilon_per_row is nonempty.
  double epsilon = 0.0;
  // Optional per-row epsilon (kFixed only).
  std::vector<double> epsilon_per_row;
  SupportMode support_mode = SupportMode::kGeneral;
  SolveEngine engine = SolveEngine::kDualProjectedGradient;
  int64_t max_iters = 2000000;
  double tol_kkt = 1e-6;
  double tol_feas = 1e-8;
  // 0 = automatic (Gerschgorin bound on the dual Hessian; a power-iteration
  // estimate takes over when the exact bound would be too expensive).
  double learning_rate = 0.0;
  double bisection_tol = 1e-6;
  // L2 row normalization of the constraint system before dual iteration;
  // duals are mapped back to the original scaling on return.
  bool normalize_rows = true;
  // KKT-residual stopping checks run every this-many dual iterations.
  int kkt_check_interval = 25;
  // A full-support solve that leaves the simplex triggers one general-mode
  // re-solve instead of an error.
  bool allow_full_support_fallback = true;
};

struct DualState {
  std::vector<double> alpha;  // one per constraint row, >= 0
  std::vector<double> beta;   // one per joint action, >= 0; empty in
                              // full-support mode
  double lambda = 0.0;        // multiplier of the probability equality
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  double complementarity = 0.0;

  double Max() const;
};

struct MgSolution {
  JointDistribution sigma;       // clamped + renormalized
  std::vector<double> raw_sigma; // solver output before clamping
  DualState dual;
  std::vector<double> epsilon_used;  // per-row epsilon the QP ran with
  // Scalar epsilon chosen by the family modes (min-eps reports the exact LP
  // optimum even though the QP runs with a hair of slack); NaN for per-row
  // fixed input.
  double epsilon_scalar = std::numeric_limits<double>::quiet_NaN();
  double gini = 0.0;
  KktResiduals kkt;
  int64_t iterations = 0;
  double learning_rate = 0.0;
  bool used_full_support = false;
  bool fell_back_to_general = false;
};

// eps = max_i (A b)_i with b the uniform point (b = e / sum(r)). At this
// epsilon the uniform distribution is the exact optimum. Returns 0 for
// row-less systems.
double MaxAbEpsilon(const ConstraintSystem& cs,
                    const std::vector<double>* copy_counts = nullptr);

// 2 / (max_row_abs_sum + min_row_abs_sum) of the full-support dual Hessian
// D = A C A^T, computed row-streamed (D is never materialized).
double OptimalLearningRate(const ConstraintSystem& cs,
                           const std::vector<double>* copy_counts = nullptr);

// sigma = b - C(A^T alpha - beta); exact linear recovery, never clamps.
// With empty beta the full-support form sigma = b - C A^T alpha is used.
std::vector<double> RecoverPrimal(const ConstraintSystem& cs,
                                  const DualState& dual,
                                  const std::vector<double>* copy_counts =
                                      nullptr);

// Residuals of the KKT system
//   diag(r) sigma + A^T alpha - beta + lambda r = 0       (stationarity)
//   A sigma <= eps, sigma >= 0, r^T sigma = 1              (primal)
//   alpha >= 0, beta >= 0                                  (dual)
//   alpha_i (A sigma - eps)_i = 0, beta_j sigma_j = 0      (complementarity)
// evaluated on raw_sigma against the supplied epsilon vector.
KktResiduals KktCertificate(const ConstraintSystem& cs,
                            const std::vector<double>& epsilon,
                            const std::vector<double>& raw_sigma,
                            const DualState& dual,
                            const std::vector<double>* copy_counts = nullptr);

// Dual projected-gradient engine at a fixed epsilon vector. Throws
// SolverError: kInfeasible (epsilon below min-eps), kIterationLimit,
// kFullSupportViolated (full-support mode left the simplex and fallback is
// disabled).
MgSolution SolveDualProjectedGradient(const ConstraintSystem& cs,
                                      const std::vector<double>& epsilon,
                                      const SolverConfig& config,
                                      const std::vector<double>* copy_counts =
                                          nullptr);

// Primal active-set engine at a fixed epsilon vector (dense; cross-check
// oracle for the dual engine). Throws kInfeasible / kIterationLimit.
MgSolution SolveActiveSetQp(const ConstraintSystem& cs,
                            const std::vector<double>& epsilon,
                            const SolverConfig& config,
                            const std::vector<double>* copy_counts = nullptr);

// Smallest feasible scalar epsilon (an LP with epsilon as a decision
// variable), then the max-Gini QP at that epsilon. epsilon_scalar reports
// the exact LP optimum.
MgSolution SolveMinEpsilon(const ConstraintSystem& cs,
                           const SolverConfig& config,
                           const std::vector<double>* copy_counts = nullptr);

// Bisection over [min-eps, max(A b)] for the smallest epsilon whose
// max-Gini solution has all entries > tol_feas.
MgSolution SolveFullSupportEpsilon(const ConstraintSystem& cs,
                                   const SolverConfig& config,
                                   const std::vector<double>* copy_counts =
                                       nullptr);

// Mode dispatcher: resolves the epsilon family member, picks the engine,
// and applies the automatic full-support fallback.
MgSolution SolveMaxGini(const ConstraintSystem& cs, const SolverConfig& config,
                        const std::vector<double>* copy_counts = nullptr);

// Text dump: sigma, epsilon, duals, KKT residuals, iterations. Doubles are
// printed round-trip exact.
void WriteSolutionText(std::ostream& out, const MgSolution& solution);

}  // namespace jointeq

#endif  // JOINTEQ_MG_SOLVER_H_
