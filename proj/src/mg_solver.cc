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

#include "jointeq/mg_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "jointeq/check.h"
#include "jointeq/errors.h"
#include "jointeq/logging.h"
#include "jointeq/simplex.h"

namespace jointeq {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Copy-count weights r with S = sum(r). Unweighted problems use all-ones.
struct Weights {
  std::vector<double> r;
  double total = 0.0;
};

Weights MakeWeights(int64_t n, const std::vector<double>* copy_counts) {
  Weights w;
  if (copy_counts == nullptr) {
    w.r.assign(n, 1.0);
    w.total = static_cast<double>(n);
  } else {
    JEQ_CHECK_EQ(static_cast<int64_t>(copy_counts->size()), n);
    w.r = *copy_counts;
    w.total = 0.0;
    for (double v : w.r) {
      JEQ_CHECK_GT(v, 0.0);
      w.total += v;
    }
  }
  return w;
}

double SumOf(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// sigma_j = (1 + sum(w)) / S - w_j / r_j, i.e. sigma = b - C_r(w) with
// C_r(x) = x ./ r - e * sum(x) / S and b = e / S. Always sums (in exact
// arithmetic) to 1 under r^T sigma.
void SigmaFromW(const Weights& weights, const std::vector<double>& w,
                std::vector<double>* sigma) {
  const double shift = (1.0 + SumOf(w)) / weights.total;
  const int64_t n = static_cast<int64_t>(w.size());
  sigma->resize(n);
#pragma omp parallel for schedule(static)
  for (int64_t j = 0; j < n; ++j) {
    (*sigma)[j] = shift - w[j] / weights.r[j];
  }
}

double LambdaFromW(const Weights& weights, const std::vector<double>& w) {
  return -(1.0 + SumOf(w)) / weights.total;
}

// u = C_r(x) densely (x given densely).
void ApplyCenter(const Weights& weights, const std::vector<double>& x,
                 std::vector<double>* u) {
  const double shift = SumOf(x) / weights.total;
  const int64_t n = static_cast<int64_t>(x.size());
  u->resize(n);
  for (int64_t j = 0; j < n; ++j) (*u)[j] = x[j] / weights.r[j] - shift;
}

// Dense u = C_r(a_i) for a sparse row.
void CenterSparseRow(const SparseRowMatrix& a, int64_t row,
                     const Weights& weights, std::vector<double>* u) {
  double row_sum = 0.0;
  for (int64_t k = a.row_start[row]; k < a.row_start[row + 1]; ++k) {
    row_sum += a.val[k];
  }
  const double shift = row_sum / weights.total;
  u->assign(a.num_cols, -shift);
  for (int64_t k = a.row_start[row]; k < a.row_start[row + 1]; ++k) {
    (*u)[a.col[k]] += a.val[k] / weights.r[a.col[k]];
  }
}

double MaxAbs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Smallest scalar t with A sigma <= offset + t e, r^T sigma = 1, sigma >= 0
// (t is free). Returns {t*, sigma*}.
struct MinEpsLp {
  double t = 0.0;
  std::vector<double> sigma;
};

MinEpsLp SolveMinEpsilonLp(const ConstraintSystem& cs, const Weights& weights,
                           const std::vector<double>* offset) {
  const int64_t n = cs.num_joint_actions();
  const int64_t rows = cs.num_rows();
  MinEpsLp out;
  if (rows == 0) {
    // No incentive rows: every epsilon works; by convention report 0.
    out.t = 0.0;
    out.sigma.assign(n, 1.0 / weights.total);
    return out;
  }
  LpProblem p;
  // Variables: sigma (n), then t+ and t-.
  p.c.assign(n + 2, 0.0);
  p.c[n] = 1.0;
  p.c[n + 1] = -1.0;
  p.a_ub.reserve(rows);
  for (int64_t i = 0; i < rows; ++i) {
    std::vector<double> row = DenseRow(cs.rows, i);
    row.push_back(-1.0);
    row.push_back(1.0);
    p.a_ub.push_back(std::move(row));
    p.b_ub.push_back(offset == nullptr ? 0.0 : (*offset)[i]);
  }
  std::vector<double> eq = weights.r;
  eq.push_back(0.0);
  eq.push_back(0.0);
  p.a_eq.push_back(std::move(eq));
  p.b_eq.push_back(1.0);

  const LpResult lp = SolveLp(p);
  if (lp.status == LpStatus::kUnbounded) {
    throw SolverError(ErrorCode::kUnbounded,
                      "min-epsilon LP unbounded; internal error");
  }
  JEQ_CHECK_TRUE(lp.status == LpStatus::kOptimal);
  out.t = lp.x[n] - lp.x[n + 1];
  out.sigma.assign(lp.x.begin(), lp.x.begin() + n);
  return out;
}

}  // namespace

double KktResiduals::Max() const {
  return std::max(std::max(stationarity, primal_feasibility),
                  std::max(dual_feasibility, complementarity));
}

double MaxAbEpsilon(const ConstraintSystem& cs,
                    const std::vector<double>* copy_counts) {
  const Weights weights = MakeWeights(cs.num_joint_actions(), copy_counts);
  const int64_t rows = cs.num_rows();
  if (rows == 0) return 0.0;
  double best = -kInfinity;
  for (int64_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k) {
      s += cs.rows.val[k];
    }
    best = std::max(best, s / weights.total);
  }
  return best;
}

double OptimalLearningRate(const ConstraintSystem& cs,
                           const std::vector<double>* copy_counts) {
  const int64_t rows = cs.num_rows();
  if (rows == 0) {
    FatalError("optimal learning rate undefined: no constraint rows");
  }
  const Weights weights = MakeWeights(cs.num_joint_actions(), copy_counts);
  // Row-streamed Gerschgorin sums of D = A C_r A^T.
  std::vector<double> row_abs_sum(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < rows; ++i) {
    std::vector<double> u;
    CenterSparseRow(cs.rows, i, weights, &u);
    std::vector<double> du(rows, 0.0);
    MultiplySerial(cs.rows, u.data(), du.data());
    double s = 0.0;
    for (double v : du) s += std::abs(v);
    row_abs_sum[i] = s;
  }
  const double max_sum = *std::max_element(row_abs_sum.begin(), row_abs_sum.end());
  const double min_sum = *std::min_element(row_abs_sum.begin(), row_abs_sum.end());
  if (max_sum <= 0.0) {
    FatalError("optimal learning rate undefined: all constraint rows are zero");
  }
  return 2.0 / (max_sum + min_sum);
}

std::vector<double> RecoverPrimal(const ConstraintSystem& cs,
                                  const DualState& dual,
                                  const std::vector<double>* copy_counts) {
  const int64_t n = cs.num_joint_actions();
  const Weights weights = MakeWeights(n, copy_counts);
  JEQ_CHECK_EQ(static_cast<int64_t>(dual.alpha.size()), cs.num_rows());
  std::vector<double> w(n, 0.0);
  if (cs.num_rows() > 0) {
    AddMultiplyTransposeSerial(cs.rows, dual.alpha.data(), 1.0, w.data());
  }
  if (!dual.beta.empty()) {
    JEQ_CHECK_EQ(dual.beta.size(), static_cast<size_t>(n));
    for (int64_t j = 0; j < n; ++j) w[j] -= dual.beta[j];
  }
  std::vector<double> sigma;
  SigmaFromW(weights, w, &sigma);
  return sigma;
}

KktResiduals KktCertificate(const ConstraintSystem& cs,
                            const std::vector<double>& epsilon,
                            const std::vector<double>& raw_sigma,
                            const DualState& dual,
                            const std::vector<double>* copy_counts) {
  const int64_t n = cs.num_joint_actions();
  const int64_t rows = cs.num_rows();
  JEQ_CHECK_EQ(static_cast<int64_t>(raw_sigma.size()), n);
  JEQ_CHECK_EQ(static_cast<int64_t>(epsilon.size()), rows);
  JEQ_CHECK_EQ(static_cast<int64_t>(dual.alpha.size()), rows);
  const Weights weights = MakeWeights(n, copy_counts);

  KktResiduals res;

  // Stationarity: diag(r) sigma + A^T alpha - beta + lambda r = 0.
  std::vector<double> grad(n, 0.0);
  for (int64_t j = 0; j < n; ++j) {
    grad[j] = weights.r[j] * (raw_sigma[j] + dual.lambda);
  }
  if (rows > 0) {
    AddMultiplyTransposeSerial(cs.rows, dual.alpha.data(), 1.0, grad.data());
  }
  if (!dual.beta.empty()) {
    for (int64_t j = 0; j < n; ++j) grad[j] -= dual.beta[j];
  }
  res.stationarity = MaxAbs(grad);

  // Primal feasibility: A sigma <= eps, sigma >= 0, r^T sigma = 1.
  std::vector<double> slack(rows, 0.0);
  if (rows > 0) MultiplySerial(cs.rows, raw_sigma.data(), slack.data());
  double primal = 0.0;
  double compl_res = 0.0;
  for (int64_t i = 0; i < rows; ++i) {
    const double violation = slack[i] - epsilon[i];
    primal = std::max(primal, violation);
    compl_res = std::max(compl_res, std::abs(dual.alpha[i] * violation));
  }
  double mass = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    primal = std::max(primal, -raw_sigma[j]);
    mass += weights.r[j] * raw_sigma[j];
    if (!dual.beta.empty()) {
      compl_res = std::max(compl_res, std::abs(dual.beta[j] * raw_sigma[j]));
    }
  }
  res.primal_feasibility = std::max(primal, std::abs(mass - 1.0));
  res.complementarity = compl_res;

  double dual_feas = 0.0;
  for (double a : dual.alpha) dual_feas = std::max(dual_feas, -a);
  for (double b : dual.beta) dual_feas = std::max(dual_feas, -b);
  res.dual_feasibility = std::max(dual_feas, 0.0);
  return res;
}

namespace {

// Learning rate for general-support mode. The dual iteration moves (alpha,
// beta) jointly, so the rate must cover the joint Hessian
//   H = [[A C A^T, -A C], [-C A^T, C]]  (C = C_r, PSD),
// not just the alpha block. Exact Gerschgorin row sums are used while the
// row-streaming cost R*(N+nnz) stays affordable; beyond that a power
// iteration estimates the top eigenvalue. Either way the solve loop keeps a
// halve-on-divergence safeguard.
double GeneralLearningRate(const ConstraintSystem& cs,
                           const SparseRowMatrix& a_transpose,
                           const Weights& weights) {
  const int64_t rows = cs.num_rows();
  const int64_t n = cs.num_joint_actions();
  const int64_t nnz = cs.rows.nnz();
  const double exact_cost = static_cast<double>(rows) *
                            (static_cast<double>(n) + static_cast<double>(nnz));
  if (exact_cost <= 2e8) {
    double max_sum = 0.0;
    double min_sum = kInfinity;
    // Alpha-block rows: |A C a_i| row sums plus the cross block |C a_i|.
    std::vector<double> block1(rows, 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < rows; ++i) {
      std::vector<double> u;
      CenterSparseRow(cs.rows, i, weights, &u);
      std::vector<double> du(rows, 0.0);
      MultiplySerial(cs.rows, u.data(), du.data());
      double s = 0.0;
      for (double v : du) s += std::abs(v);
      for (double v : u) s += std::abs(v);
      block1[i] = s;
    }
    for (double s : block1) {
      max_sum = std::max(max_sum, s);
      min_sum = std::min(min_sum, s);
    }
    // Beta-block rows: |C a^T_i| columns and the C block itself.
    // (A C_r)_{.,k} = (column k of A)/r_k - (A e)/S.
    std::vector<double> a_row_sums(rows, 0.0);
    for (int64_t i = 0; i < rows; ++i) {
      for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1];
           ++k) {
        a_row_sums[i] += cs.rows.val[k];
      }
    }
    double base = 0.0;  // sum_i |  - t_i / S |
    for (double t : a_row_sums) base += std::abs(t) / weights.total;
    std::vector<double> block2(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t k = 0; k < n; ++k) {
      double s = base;
      for (int64_t kk = a_transpose.row_start[k];
           kk < a_transpose.row_start[k + 1]; ++kk) {
        const int64_t i = a_transpose.col[kk];
        const double with = std::abs(a_transpose.val[kk] / weights.r[k] -
                                     a_row_sums[i] / weights.total);
        s += with - std::abs(a_row_sums[i]) / weights.total;
      }
      // Row k of C_r itself.
      s += std::abs(1.0 / weights.r[k] - 1.0 / weights.total) +
           static_cast<double>(n - 1) / weights.total;
      block2[k] = s;
    }
    for (double s : block2) {
      max_sum = std::max(max_sum, s);
      min_sum = std::min(min_sum, s);
    }
    if (max_sum <= 0.0) FatalError("degenerate dual Hessian");
    return 2.0 / (max_sum + min_sum);
  }

  // Power iteration on the joint Hessian operator.
  std::vector<double> xa(rows, 1.0), xb(n, 1.0);
  std::vector<double> w(n), u(n), ya(rows), yb(n);
  double lambda_max = 0.0;
  for (int step = 0; step < 40; ++step) {
    // w = A^T xa - xb; u = C_r w; ya = A u; yb = -u.
    std::fill(w.begin(), w.end(), 0.0);
    Multiply(a_transpose, xa.data(), w.data());
    for (int64_t j = 0; j < n; ++j) w[j] -= xb[j];
    ApplyCenter(weights, w, &u);
    Multiply(cs.rows, u.data(), ya.data());
    for (int64_t j = 0; j < n; ++j) yb[j] = -u[j];
    double norm_sq = 0.0;
    for (double v : ya) norm_sq += v * v;
    for (double v : yb) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (norm <= 1e-300) FatalError("degenerate dual Hessian");
    lambda_max = norm;  // Rayleigh lag: ||H x|| with ||x|| = 1
    for (int64_t i = 0; i < rows; ++i) xa[i] = ya[i] / norm;
    for (int64_t j = 0; j < n; ++j) xb[j] = yb[j] / norm;
  }
  return 1.5 / lambda_max;
}

struct StopResiduals {
  double feas_rows = 0.0;     // max(A sigma - eps) on the original system
  double feas_nonneg = 0.0;   // max(-sigma)
  double complementarity = 0.0;
};

}  // namespace

MgSolution SolveDualProjectedGradient(const ConstraintSystem& cs,
                                      const std::vector<double>& epsilon,
                                      const SolverConfig& config,
                                      const std::vector<double>* copy_counts) {
  const int64_t n = cs.num_joint_actions();
  const int64_t rows = cs.num_rows();
  JEQ_CHECK_EQ(static_cast<int64_t>(epsilon.size()), rows);
  JEQ_CHECK_GT(config.max_iters, 0);
  JEQ_CHECK_GT(config.kkt_check_interval, 0);
  JEQ_CHECK_GT(config.tol_kkt, 0.0);
  JEQ_CHECK_GT(config.tol_feas, 0.0);
  const Weights weights = MakeWeights(n, copy_counts);
  const bool full_support = config.support_mode == SupportMode::kFullSupport;

  MgSolution out;
  out.epsilon_used = epsilon;
  out.used_full_support = full_support;

  if (rows == 0 || n == 1) {
    // No incentive rows: the uniform point is the unconstrained optimum.
    out.raw_sigma.assign(n, 1.0 / weights.total);
    out.sigma = ClampAndNormalize(out.raw_sigma);
    out.dual.alpha.assign(rows, 0.0);
    if (!full_support) out.dual.beta.assign(n, 0.0);
    out.dual.lambda = -1.0 / weights.total;
    out.kkt = KktCertificate(cs, epsilon, out.raw_sigma, out.dual, copy_counts);
    double sq = 0.0;
    for (int64_t j = 0; j < n; ++j) {
      sq += weights.r[j] * out.sigma.probs[j] * out.sigma.probs[j];
    }
    out.gini = 1.0 - sq;
    return out;
  }

  // Preconditioning: L2 row normalization (feasible set unchanged).
  ConstraintSystem scratch;
  const ConstraintSystem* work = &cs;
  std::vector<double> work_eps = epsilon;
  std::vector<int64_t> kept_rows;
  std::vector<double> row_scale;
  if (config.normalize_rows) {
    NormalizedSystem ns = NormalizeRows(cs);
    kept_rows = std::move(ns.kept_rows);
    row_scale = std::move(ns.row_scale);
    scratch = std::move(ns.system);
    work = &scratch;
    work_eps.resize(kept_rows.size());
    for (size_t i = 0; i < kept_rows.size(); ++i) {
      work_eps[i] = epsilon[kept_rows[i]] / row_scale[i];
    }
  } else {
    kept_rows.resize(rows);
    std::iota(kept_rows.begin(), kept_rows.end(), 0);
    row_scale.assign(rows, 1.0);
  }
  const int64_t work_rows = work->num_rows();
  const SparseRowMatrix a_transpose = Transpose(work->rows);

  double gamma = config.learning_rate;
  if (gamma <= 0.0) {
    gamma = full_support ? OptimalLearningRate(*work, copy_counts)
                         : GeneralLearningRate(*work, a_transpose, weights);
  }
  out.learning_rate = gamma;

  std::vector<double> alpha(work_rows, 0.0);
  std::vector<double> beta(full_support ? 0 : n, 0.0);
  std::vector<double> w(n, 0.0), sigma(n, 0.0), viol(work_rows, 0.0);
  std::vector<double> orig_slack(rows, 0.0);
  std::vector<double> alpha_orig(rows, 0.0);

  // Best-seen snapshot for the divergence safeguard.
  double best_residual = kInfinity;
  std::vector<double> best_alpha = alpha;
  std::vector<double> best_beta = beta;

  const auto recover = [&]() {
    std::fill(w.begin(), w.end(), 0.0);
    Multiply(a_transpose, alpha.data(), w.data());
    if (!full_support) {
      for (int64_t j = 0; j < n; ++j) w[j] -= beta[j];
    }
    SigmaFromW(weights, w, &sigma);
  };

  const auto map_alpha_back = [&]() {
    std::fill(alpha_orig.begin(), alpha_orig.end(), 0.0);
    for (int64_t i = 0; i < work_rows; ++i) {
      alpha_orig[kept_rows[i]] = alpha[i] / row_scale[i];
    }
  };

  // Stop residuals are evaluated against the ORIGINAL system so that the
  // certificate at return matches what the loop converged on.
  const auto stop_residuals = [&]() {
    StopResiduals s;
    MultiplySerial(cs.rows, sigma.data(), orig_slack.data());
    map_alpha_back();
    for (int64_t i = 0; i < rows; ++i) {
      const double violation = orig_slack[i] - epsilon[i];
      s.feas_rows = std::max(s.feas_rows, violation);
      s.complementarity =
          std::max(s.complementarity, std::abs(alpha_orig[i] * violation));
    }
    for (int64_t j = 0; j < n; ++j) {
      s.feas_nonneg = std::max(s.feas_nonneg, -sigma[j]);
      if (!full_support) {
        s.complementarity =
            std::max(s.complementarity, std::abs(beta[j] * sigma[j]));
      }
    }
    return s;
  };

  int64_t iterations = 0;
  bool converged = false;
  double last_checked = kInfinity;
  for (int64_t it = 1; it <= config.max_iters; ++it) {
    iterations = it;
    recover();
    Multiply(work->rows, sigma.data(), viol.data());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < work_rows; ++i) {
      alpha[i] = std::max(0.0, alpha[i] + gamma * (viol[i] - work_eps[i]));
    }
    if (!full_support) {
#pragma omp parallel for schedule(static)
      for (int64_t j = 0; j < n; ++j) {
        beta[j] = std::max(0.0, beta[j] - gamma * sigma[j]);
      }
    }

    if (it % config.kkt_check_interval == 0 || it == config.max_iters) {
      recover();
      const StopResiduals s = stop_residuals();
      double residual = std::max(s.feas_rows, s.complementarity);
      if (!full_support) residual = std::max(residual, s.feas_nonneg);
      if (!std::isfinite(residual)) {
        gamma *= 0.5;
        alpha = best_alpha;
        beta = best_beta;
        LogDebug("dual engine: non-finite residual; halving rate to ", gamma);
        continue;
      }
      if (residual <= config.tol_kkt) {
        converged = true;
        break;
      }
      if (residual < best_residual) {
        best_residual = residual;
        best_alpha = alpha;
        best_beta = beta;
      } else if (residual > 50.0 * best_residual && residual > last_checked) {
        gamma *= 0.5;
        alpha = best_alpha;
        beta = best_beta;
        LogDebug("dual engine: diverging residual ", residual,
                 "; halving rate to ", gamma);
      }
      last_checked = residual;
      // Unbounded dual => empty primal polytope.
      if (MaxAbs(alpha) > 1e10 && s.feas_rows > 1e3 * config.tol_feas) {
        throw SolverError(ErrorCode::kInfeasible,
                          "dual iterates diverge; epsilon lies below the "
                          "minimum feasible epsilon");
      }
    }
  }

  if (!converged) {
    // Distinguish an empty polytope from slow convergence when the
    // feasibility LP is affordable.
    if (static_cast<double>(rows) * static_cast<double>(n) <= 2e7) {
      const MinEpsLp feas = SolveMinEpsilonLp(cs, weights, &epsilon);
      if (feas.t > config.tol_feas) {
        throw SolverError(ErrorCode::kInfeasible,
                          "epsilon lies below the minimum feasible epsilon "
                          "(feasibility LP gap " +
                              std::to_string(feas.t) + ")");
      }
    }
    throw SolverError(ErrorCode::kIterationLimit,
                      "dual projected gradient: no KKT point within " +
                          std::to_string(config.max_iters) +
                          " iterations (best residual " +
                          std::to_string(best_residual) + ")");
  }

  recover();
  map_alpha_back();

  if (full_support) {
    double min_sigma = kInfinity;
    for (double v : sigma) min_sigma = std::min(min_sigma, v);
    if (min_sigma < -config.tol_feas) {
      throw SolverError(
          ErrorCode::kFullSupportViolated,
          "full-support solve left the simplex (min sigma " +
              std::to_string(min_sigma) + "); general mode required");
    }
  }

  out.raw_sigma = sigma;
  out.sigma = ClampAndNormalize(sigma, 10.0 * config.tol_kkt);
  out.dual.alpha = std::move(alpha_orig);
  if (!full_support) out.dual.beta = std::move(beta);
  out.dual.lambda = LambdaFromW(weights, w);
  out.iterations = iterations;
  out.learning_rate = gamma;
  out.kkt = KktCertificate(cs, epsilon, out.raw_sigma, out.dual, copy_counts);
  double sq = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    sq += weights.r[j] * out.sigma.probs[j] * out.sigma.probs[j];
  }
  out.gini = 1.0 - sq;
  return out;
}

namespace {

// Engine dispatch at a fixed epsilon vector, with the automatic
// full-support -> general fallback.
// When the uniform point already satisfies every deviation constraint it is
// the exact optimum: it maximizes the Gini impurity over the whole simplex.
// Returning it directly keeps the result bit-exact (no renormalization) and
// gives closed-form duals.
bool UniformIsFeasible(const ConstraintSystem& cs,
                       const std::vector<double>& epsilon,
                       const Weights& weights) {
  const int64_t n = cs.num_joint_actions();
  std::vector<double> b(n);
  for (int64_t j = 0; j < n; ++j) b[j] = 1.0 / weights.total;
  std::vector<double> slack(cs.num_rows());
  if (cs.num_rows() > 0) MultiplySerial(cs.rows, b.data(), slack.data());
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    if (slack[i] > epsilon[i]) return false;
  }
  return true;
}

MgSolution UniformSolution(const ConstraintSystem& cs,
                           const std::vector<double>& epsilon,
                           const SolverConfig& config,
                           const std::vector<double>* copy_counts,
                           const Weights& weights) {
  const int64_t n = cs.num_joint_actions();
  MgSolution solution;
  solution.raw_sigma.assign(n, 1.0 / weights.total);
  solution.sigma = JointDistribution{solution.raw_sigma};
  solution.dual.alpha.assign(cs.num_rows(), 0.0);
  if (config.support_mode == SupportMode::kGeneral) {
    solution.dual.beta.assign(n, 0.0);
  }
  solution.dual.lambda = -1.0 / weights.total;
  solution.epsilon_used = epsilon;
  solution.kkt =
      KktCertificate(cs, epsilon, solution.raw_sigma, solution.dual,
                     copy_counts);
  solution.iterations = 0;
  solution.used_full_support =
      config.support_mode == SupportMode::kFullSupport;
  double sq = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    sq += weights.r[j] * solution.raw_sigma[j] * solution.raw_sigma[j];
  }
  solution.gini = 1.0 - sq;
  return solution;
}

MgSolution SolveFixedVector(const ConstraintSystem& cs,
                            const std::vector<double>& epsilon,
                            const SolverConfig& config,
                            const std::vector<double>* copy_counts) {
  {
    const Weights weights = MakeWeights(cs.num_joint_actions(), copy_counts);
    if (UniformIsFeasible(cs, epsilon, weights)) {
      return UniformSolution(cs, epsilon, config, copy_counts, weights);
    }
  }
  if (config.engine == SolveEngine::kPrimalActiveSet) {
    return SolveActiveSetQp(cs, epsilon, config, copy_counts);
  }
  if (config.support_mode == SupportMode::kFullSupport) {
    try {
      return SolveDualProjectedGradient(cs, epsilon, config, copy_counts);
    } catch (const SolverError& e) {
      if (e.code() != ErrorCode::kFullSupportViolated ||
          !config.allow_full_support_fallback) {
        throw;
      }
      LogInfo("full-support solve violated sigma >= 0; re-solving in general "
              "mode");
      SolverConfig general = config;
      general.support_mode = SupportMode::kGeneral;
      MgSolution solution =
          SolveDualProjectedGradient(cs, epsilon, general, copy_counts);
      solution.fell_back_to_general = true;
      return solution;
    }
  }
  return SolveDualProjectedGradient(cs, epsilon, config, copy_counts);
}

}  // namespace

MgSolution SolveMinEpsilon(const ConstraintSystem& cs,
                           const SolverConfig& config,
                           const std::vector<double>* copy_counts) {
  const Weights weights = MakeWeights(cs.num_joint_actions(), copy_counts);
  const MinEpsLp lp = SolveMinEpsilonLp(cs, weights, nullptr);
  // The QP runs a hair above the exact optimum so its dual stays bounded;
  // the reported epsilon is the exact LP value.
  const double eps_for_qp = lp.t + config.tol_feas;
  SolverConfig fixed = config;
  fixed.support_mode = SupportMode::kGeneral;
  std::vector<double> eps_vec(cs.num_rows(), eps_for_qp);
  MgSolution solution = SolveFixedVector(cs, eps_vec, fixed, copy_counts);
  solution.epsilon_scalar = lp.t;
  return solution;
}

MgSolution SolveFullSupportEpsilon(const ConstraintSystem& cs,
                                   const SolverConfig& config,
                                   const std::vector<double>* copy_counts) {
  const Weights weights = MakeWeights(cs.num_joint_actions(), copy_counts);
  SolverConfig probe = config;
  probe.support_mode = SupportMode::kGeneral;
  // Support decisions need sigma resolved well below tol_feas.
  probe.tol_kkt = std::min(config.tol_kkt, 1e-8);

  const auto solve_at = [&](double eps) {
    std::vector<double> eps_vec(cs.num_rows(), eps);
    return SolveFixedVector(cs, eps_vec, probe, copy_counts);
  };
  const auto has_full_support = [&](const MgSolution& s) {
    for (double v : s.raw_sigma) {
      if (v <= config.tol_feas) return false;
    }
    return true;
  };

  double lo = SolveMinEpsilonLp(cs, weights, nullptr).t;
  double hi = MaxAbEpsilon(cs, copy_counts);
  if (hi < lo) hi = lo;

  MgSolution at_lo = solve_at(lo);
  if (has_full_support(at_lo)) {
    at_lo.epsilon_scalar = lo;
    return at_lo;
  }
  while (hi - lo > config.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (has_full_support(solve_at(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  MgSolution solution = solve_at(hi);
  solution.epsilon_scalar = hi;
  return solution;
}

MgSolution SolveMaxGini(const ConstraintSystem& cs, const SolverConfig& config,
                        const std::vector<double>* copy_counts) {
  switch (config.epsilon_mode) {
    case EpsilonMode::kFixed: {
      std::vector<double> eps;
      double scalar = std::numeric_limits<double>::quiet_NaN();
      if (!config.epsilon_per_row.empty()) {
        JEQ_CHECK_EQ(static_cast<int64_t>(config.epsilon_per_row.size()),
                     cs.num_rows());
        eps = config.epsilon_per_row;
      } else {
        eps.assign(cs.num_rows(), config.epsilon);
        scalar = config.epsilon;
      }
      MgSolution solution = SolveFixedVector(cs, eps, config, copy_counts);
      solution.epsilon_scalar = scalar;
      return solution;
    }
    case EpsilonMode::kMaxAb:
    case EpsilonMode::kHalfMaxAb: {
      double scalar = MaxAbEpsilon(cs, copy_counts);
      if (config.epsilon_mode == EpsilonMode::kHalfMaxAb) scalar *= 0.5;
      std::vector<double> eps(cs.num_rows(), scalar);
      MgSolution solution = SolveFixedVector(cs, eps, config, copy_counts);
      solution.epsilon_scalar = scalar;
      return solution;
    }
    case EpsilonMode::kFullSupportMin:
      return SolveFullSupportEpsilon(cs, config, copy_counts);
    case EpsilonMode::kMinEpsilon:
      return SolveMinEpsilon(cs, config, copy_counts);
  }
  FatalError("unknown epsilon mode");
}

namespace {

void PrintDouble(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

void PrintVector(std::ostream& out, const char* key,
                 const std::vector<double>& v) {
  out << key << ':';
  for (double x : v) {
    out << ' ';
    PrintDouble(out, x);
  }
  out << '\n';
}

}  // namespace

void WriteSolutionText(std::ostream& out, const MgSolution& solution) {
  out << "joint_actions: " << solution.raw_sigma.size() << '\n';
  out << "rows: " << solution.dual.alpha.size() << '\n';
  out << "epsilon_scalar: ";
  PrintDouble(out, solution.epsilon_scalar);
  out << '\n';
  PrintVector(out, "epsilon", solution.epsilon_used);
  PrintVector(out, "sigma", solution.sigma.probs);
  PrintVector(out, "raw_sigma", solution.raw_sigma);
  PrintVector(out, "alpha", solution.dual.alpha);
  PrintVector(out, "beta", solution.dual.beta);
  out << "lambda: ";
  PrintDouble(out, solution.dual.lambda);
  out << '\n';
  out << "gini: ";
  PrintDouble(out, solution.gini);
  out << '\n';
  out << "kkt_stationarity: ";
  PrintDouble(out, solution.kkt.stationarity);
  out << '\n';
  out << "kkt_primal_feasibility: ";
  PrintDouble(out, solution.kkt.primal_feasibility);
  out << '\n';
  out << "kkt_dual_feasibility: ";
  PrintDouble(out, solution.kkt.dual_feasibility);
  out << '\n';
  out << "kkt_complementarity: ";
  PrintDouble(out, solution.kkt.complementarity);
  out << '\n';
  out << "iterations: " << solution.iterations << '\n';
  out << "learning_rate: ";
  PrintDouble(out, solution.learning_rate);
  out << '\n';
  out << "used_full_support: " << (solution.used_full_support ? 1 : 0) << '\n';
  out << "fell_back_to_general: " << (solution.fell_back_to_general ? 1 : 0)
      << '\n';
}

}  // namespace jointeq
