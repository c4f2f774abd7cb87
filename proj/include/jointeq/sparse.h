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

#ifndef JOINTEQ_SPARSE_H_
#define JOINTEQ_SPARSE_H_

#include <cstdint>
#include <vector>

namespace jointeq {

// Compressed sparse rows. Column indices are strictly increasing within a
// row, which keeps every accumulation order deterministic.
struct SparseRowMatrix {
  int64_t num_cols = 0;
  std::vector<int64_t> row_start;  // size num_rows + 1
  std::vector<int64_t> col;
  std::vector<double> val;

  int64_t num_rows() const {
    return static_cast<int64_t>(row_start.size()) - 1;
  }
  int64_t nnz() const { return static_cast<int64_t>(col.size()); }
};

class SparseBuilder {
 public:
  explicit SparseBuilder(int64_t num_cols) { m_.num_cols = num_cols; m_.row_start.push_back(0); }

  void Add(int64_t column, double value) {
    m_.col.push_back(column);
    m_.val.push_back(value);
  }
  void FinishRow() { m_.row_start.push_back(m_.nnz()); }
  SparseRowMatrix Take() { return std::move(m_); }

 private:
  SparseRowMatrix m_;
};

// y = A x. The parallel variant splits over rows; each entry is still
// accumulated in column order, so results match the serial one bit for bit.
void Multiply(const SparseRowMatrix& a, const double* x, double* y);
void MultiplySerial(const SparseRowMatrix& a, const double* x, double* y);

// y += coeff * A^T x (dense accumulation into y of size num_cols).
void AddMultiplyTransposeSerial(const SparseRowMatrix& a, const double* x,
                                double coeff, double* y);

// Explicit transpose, used so that transpose products can also run
// row-parallel deterministically.
SparseRowMatrix Transpose(const SparseRowMatrix& a);

std::vector<double> RowL2Norms(const SparseRowMatrix& a);
std::vector<double> RowL2NormsSerial(const SparseRowMatrix& a);

// Dense row of A as a vector (test and LP-tableau helper).
std::vector<double> DenseRow(const SparseRowMatrix& a, int64_t row);

}  // namespace jointeq

#endif  // JOINTEQ_SPARSE_H_
