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

#include "jointeq/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jointeq/check.h"
#include "jointeq/rng.h"

namespace jointeq {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;

class Tableau {
 public:
  Tableau(const LpProblem& p, uint64_t seed) {
    const int n = p.num_vars();
    const int m_ub = static_cast<int>(p.a_ub.size());
    const int m_eq = static_cast<int>(p.a_eq.size());
    m_ = m_ub + m_eq;
    n_struct_ = n;
    n_slack_ = m_ub;

    rows_.assign(m_, std::vector<double>(n + m_ub + 1, 0.0));
    for (int i = 0; i < m_ub; ++i) {
      JEQ_CHECK_EQ(static_cast<int>(p.a_ub[i].size()), n);
      std::copy(p.a_ub[i].begin(), p.a_ub[i].end(), rows_[i].begin());
      rows_[i][n + i] = 1.0;
      rows_[i].back() = p.b_ub[i];
    }
    for (int i = 0; i < m_eq; ++i) {
      JEQ_CHECK_EQ(static_cast<int>(p.a_eq[i].size()), n);
      std::copy(p.a_eq[i].begin(), p.a_eq[i].end(), rows_[m_ub + i].begin());
      rows_[m_ub + i].back() = p.b_eq[i];
    }
    for (auto& row : rows_) {
      if (row.back() < 0.0) {
        for (double& v : row) v = -v;
      }
    }

    // Seeded preference order over columns; exact pricing ties break on
    // this relabeling, so vertex selection varies with the seed while the
    // lexicographic leaving rule keeps the iteration cycle-free.
    pref_.resize(n + m_ub);
    std::iota(pref_.begin(), pref_.end(), 0);
    SeededSampler sampler(seed);
    for (int i = static_cast<int>(pref_.size()) - 1; i > 0; --i) {
      std::swap(pref_[i], pref_[sampler.UniformInt(i + 1)]);
    }
    rank_.assign(pref_.size() + m_, 0);
    for (size_t i = 0; i < pref_.size(); ++i) rank_[pref_[i]] = static_cast<int>(i);
    // Artificials rank after everything real.
    for (size_t i = pref_.size(); i < rank_.size(); ++i) {
      rank_[i] = static_cast<int>(i);
    }
  }

  LpResult Solve(const LpProblem& p) {
    // Phase 1: slacks of rows that kept their +1 coefficient start basic;
    // all other rows receive an artificial variable.
    basis_.assign(m_, -1);
    std::vector<int> artificial_rows;
    for (int i = 0; i < m_; ++i) {
      if (i < n_slack_ && rows_[i][n_struct_ + i] == 1.0) {
        basis_[i] = n_struct_ + i;
      } else {
        artificial_rows.push_back(i);
      }
    }
    const int n_real = n_struct_ + n_slack_;
    const int n_art = static_cast<int>(artificial_rows.size());
    art_begin_ = n_real;
    art_end_ = n_real + n_art;
    for (auto& row : rows_) {
      const double rhs = row.back();
      row.pop_back();
      row.resize(n_real + n_art, 0.0);
      row.push_back(rhs);
    }
    for (int k = 0; k < n_art; ++k) {
      rows_[artificial_rows[k]][n_real + k] = 1.0;
      basis_[artificial_rows[k]] = n_real + k;
    }

    if (n_art > 0) {
      // Objective row for min(sum of artificials), with basic columns
      // eliminated.
      obj_.assign(n_real + n_art + 1, 0.0);
      for (int k = 0; k < n_art; ++k) obj_[n_real + k] = 1.0;
      for (int i : artificial_rows) {
        for (size_t j = 0; j < obj_.size(); ++j) obj_[j] -= rows_[i][j];
      }
      if (!Iterate(n_real + n_art)) {
        FatalError("simplex phase 1 reported unbounded");
      }
      if (-obj_.back() > kPhase1Tol) {
        return LpResult{LpStatus::kInfeasible, {}, 0.0, {}};
      }
      // Pivot artificials out of the basis where possible; a row whose
      // artificial cannot leave is redundant and gets neutralized.
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < n_real) continue;
        int enter = -1;
        for (int j = 0; j < n_real; ++j) {
          if (std::abs(rows_[i][j]) > kPivotTol &&
              (enter == -1 ||
               std::abs(rows_[i][j]) > std::abs(rows_[i][enter]))) {
            enter = j;
          }
        }
        if (enter >= 0) {
          Pivot(i, enter);
        }
      }
    }

    // Phase 2 objective.
    obj_.assign(n_real + n_art + 1, 0.0);
    for (int j = 0; j < n_struct_; ++j) obj_[j] = p.c[j];
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct_ && obj_[basis_[i]] != 0.0) {
        const double factor = obj_[basis_[i]];
        for (size_t j = 0; j < obj_.size(); ++j) obj_[j] -= factor * rows_[i][j];
      }
    }
    if (!Iterate(n_real)) {
      return LpResult{LpStatus::kUnbounded, {}, 0.0, {}};
    }

    LpResult result;
    result.status = LpStatus::kOptimal;
    result.x.assign(n_struct_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct_) result.x[basis_[i]] = rows_[i].back();
    }
    result.objective = 0.0;
    for (int j = 0; j < n_struct_; ++j) result.objective += p.c[j] * result.x[j];
    result.basis = basis_;
    return result;
  }

 private:
  // Columns >= allowed_cols (the artificials in phase 2) never enter.
  //
  // Pricing runs Dantzig's rule (seeded rank order breaks exact ties); the
  // leaving row comes from a lexicographic ratio test, the perturbation-free
  // anti-cycling rule. Every initial row is lex-positive in the comparison
  // order (rhs, artificial block, slack block, structural block) because a
  // row's own +1 identity column precedes any negated slack, and the rule
  // preserves that invariant, so the iteration terminates for any entering
  // choice — even on the fully degenerate vertices that equilibrium
  // polytopes produce at epsilon zero.
  bool Iterate(int allowed_cols) {
    const int64_t max_pivots =
        20000 + 200ll * static_cast<int64_t>(obj_.size());
    for (int64_t step = 0; step < max_pivots; ++step) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (obj_[j] >= -kPivotTol) continue;
        if (enter == -1 || obj_[j] < obj_[enter] ||
            (obj_[j] == obj_[enter] && rank_[j] < rank_[enter])) {
          enter = j;
        }
      }
      if (enter == -1) return true;

      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= kPivotTol) continue;
        if (leave == -1 || LexRatioLess(i, leave, enter)) leave = i;
      }
      if (leave == -1) return false;  // unbounded direction

      Pivot(leave, enter);
      // Degenerate pivots update by an exact zero; only genuine steps carry
      // rounding noise, which this keeps away from the ratio test.
      for (int i = 0; i < m_; ++i) {
        double& rhs = rows_[i].back();
        if (rhs < 0.0 && rhs > -1e-11) rhs = 0.0;
      }
    }
    FatalError("simplex exceeded its pivot budget");
  }

  // True when row a's tableau vector scaled by the entering column is
  // lexicographically smaller than row b's, comparing rhs first and then the
  // artificial, slack, and structural blocks. Cross-multiplied to avoid
  // division noise; both pivot entries are positive.
  bool LexRatioLess(int a, int b, int col) {
    const double pa = rows_[a][col];
    const double pb = rows_[b][col];
    const auto cmp = [&](double va, double vb) {
      const double lhs = va * pb;
      const double rhs = vb * pa;
      if (lhs < rhs) return -1;
      if (lhs > rhs) return 1;
      return 0;
    };
    int c = cmp(rows_[a].back(), rows_[b].back());
    if (c != 0) return c < 0;
    for (int j = art_begin_; j < art_end_; ++j) {
      c = cmp(rows_[a][j], rows_[b][j]);
      if (c != 0) return c < 0;
    }
    for (int j = n_struct_; j < n_struct_ + n_slack_; ++j) {
      c = cmp(rows_[a][j], rows_[b][j]);
      if (c != 0) return c < 0;
    }
    for (int j = 0; j < n_struct_; ++j) {
      c = cmp(rows_[a][j], rows_[b][j]);
      if (c != 0) return c < 0;
    }
    return false;
  }

  void Pivot(int row, int col) {
    const double inv = 1.0 / rows_[row][col];
    for (double& v : rows_[row]) v *= inv;
    rows_[row][col] = 1.0;  // avoid drift on the pivot element
    for (int i = 0; i < m_; ++i) {
      if (i == row || rows_[i][col] == 0.0) continue;
      const double factor = rows_[i][col];
      for (size_t j = 0; j < rows_[i].size(); ++j) {
        rows_[i][j] -= factor * rows_[row][j];
      }
      rows_[i][col] = 0.0;
    }
    if (obj_[col] != 0.0) {
      const double factor = obj_[col];
      for (size_t j = 0; j < obj_.size(); ++j) obj_[j] -= factor * rows_[row][j];
      obj_[col] = 0.0;
    }
    basis_[row] = col;
  }

  int m_ = 0;
  int n_struct_ = 0;
  int n_slack_ = 0;
  int art_begin_ = 0;
  int art_end_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  std::vector<int> pref_;
  std::vector<int> rank_;
};

}  // namespace

LpResult SolveLp(const LpProblem& problem, uint64_t seed) {
  JEQ_CHECK_EQ(problem.a_ub.size(), problem.b_ub.size());
  JEQ_CHECK_EQ(problem.a_eq.size(), problem.b_eq.size());
  JEQ_CHECK_GT(problem.num_vars(), 0);
  Tableau tableau(problem, seed);
  return tableau.Solve(problem);
}

}  // namespace jointeq
