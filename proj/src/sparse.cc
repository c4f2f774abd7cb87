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

#include "jointeq/sparse.h"

#include <cmath>
#include <numeric>

#include "jointeq/check.h"

namespace jointeq {

void MultiplySerial(const SparseRowMatrix& a, const double* x, double* y) {
  const int64_t rows = a.num_rows();
  for (int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      acc += a.val[k] * x[a.col[k]];
    }
    y[i] = acc;
  }
}

void Multiply(const SparseRowMatrix& a, const double* x, double* y) {
  const int64_t rows = a.num_rows();
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      acc += a.val[k] * x[a.col[k]];
    }
    y[i] = acc;
  }
}

void AddMultiplyTransposeSerial(const SparseRowMatrix& a, const double* x,
                                double coeff, double* y) {
  const int64_t rows = a.num_rows();
  for (int64_t i = 0; i < rows; ++i) {
    const double c = coeff * x[i];
    if (c == 0.0) continue;
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      y[a.col[k]] += c * a.val[k];
    }
  }
}

SparseRowMatrix Transpose(const SparseRowMatrix& a) {
  const int64_t rows = a.num_rows();
  SparseRowMatrix t;
  t.num_cols = rows;
  t.row_start.assign(a.num_cols + 1, 0);
  for (int64_t k = 0; k < a.nnz(); ++k) t.row_start[a.col[k] + 1]++;
  for (int64_t c = 0; c < a.num_cols; ++c) t.row_start[c + 1] += t.row_start[c];
  t.col.resize(a.nnz());
  t.val.resize(a.nnz());
  std::vector<int64_t> fill(t.row_start.begin(), t.row_start.end() - 1);
  // Row-by-row scan keeps the transposed columns sorted.
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      const int64_t pos = fill[a.col[k]]++;
      t.col[pos] = i;
      t.val[pos] = a.val[k];
    }
  }
  return t;
}

std::vector<double> RowL2NormsSerial(const SparseRowMatrix& a) {
  const int64_t rows = a.num_rows();
  std::vector<double> norms(rows);
  for (int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      acc += a.val[k] * a.val[k];
    }
    norms[i] = std::sqrt(acc);
  }
  return norms;
}

std::vector<double> RowL2Norms(const SparseRowMatrix& a) {
  const int64_t rows = a.num_rows();
  std::vector<double> norms(rows);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      acc += a.val[k] * a.val[k];
    }
    norms[i] = std::sqrt(acc);
  }
  return norms;
}

std::vector<double> DenseRow(const SparseRowMatrix& a, int64_t row) {
  JEQ_CHECK_GE(row, 0);
  JEQ_CHECK_LT(row, a.num_rows());
  std::vector<double> out(a.num_cols, 0.0);
  for (int64_t k = a.row_start[row]; k < a.row_start[row + 1]; ++k) {
    out[a.col[k]] = a.val[k];
  }
  return out;
}

}  // namespace jointeq
