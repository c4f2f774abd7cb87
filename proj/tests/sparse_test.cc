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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "jointeq/rng.h"
#include "jointeq/sparse.h"

namespace jointeq {
namespace {

SparseRowMatrix RandomMatrix(int64_t rows, int64_t cols, double density,
                             SeededSampler* sampler) {
  SparseBuilder builder(cols);
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) {
      if (sampler->UniformDouble() < density) {
        builder.Add(j, sampler->Gaussian());
      }
    }
    builder.FinishRow();
  }
  return builder.Take();
}

std::vector<std::vector<double>> ToDense(const SparseRowMatrix& a) {
  std::vector<std::vector<double>> dense(a.num_rows(),
                                         std::vector<double>(a.num_cols, 0.0));
  for (int64_t i = 0; i < a.num_rows(); ++i) {
    for (int64_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      dense[i][a.col[k]] = a.val[k];
    }
  }
  return dense;
}

TEST_CASE("builder produces well-formed CSR") {
  SparseBuilder builder(4);
  builder.Add(1, 2.0);
  builder.Add(3, -1.0);
  builder.FinishRow();
  builder.FinishRow();  // empty row
  builder.Add(0, 5.0);
  builder.FinishRow();
  const SparseRowMatrix m = builder.Take();
  CHECK(m.num_rows() == 3);
  CHECK(m.num_cols == 4);
  CHECK(m.nnz() == 3);
  CHECK(m.row_start == std::vector<int64_t>{0, 2, 2, 3});
  CHECK(m.col == std::vector<int64_t>{1, 3, 0});
}

TEST_CASE("multiply matches a dense oracle") {
  SeededSampler sampler(7);
  const SparseRowMatrix a = RandomMatrix(13, 9, 0.4, &sampler);
  std::vector<double> x(9);
  for (double& v : x) v = sampler.Gaussian();
  std::vector<double> y(13, 0.0);
  MultiplySerial(a, x.data(), y.data());

  const auto dense = ToDense(a);
  for (int64_t i = 0; i < 13; ++i) {
    double expect = 0.0;
    for (int64_t j = 0; j < 9; ++j) expect += dense[i][j] * x[j];
    CHECK(y[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("parallel multiply is bit-identical to serial") {
  SeededSampler sampler(11);
  const SparseRowMatrix a = RandomMatrix(64, 33, 0.3, &sampler);
  std::vector<double> x(33);
  for (double& v : x) v = sampler.Gaussian();
  std::vector<double> serial(64, 0.0), parallel(64, 1.0);
  MultiplySerial(a, x.data(), serial.data());
  Multiply(a, x.data(), parallel.data());
  for (int64_t i = 0; i < 64; ++i) {
    CHECK(serial[i] == parallel[i]);  // exact
  }
}

TEST_CASE("transpose multiply accumulates correctly") {
  SeededSampler sampler(3);
  const SparseRowMatrix a = RandomMatrix(6, 5, 0.5, &sampler);
  std::vector<double> x(6);
  for (double& v : x) v = sampler.Gaussian();
  std::vector<double> y(5, 0.25);
  AddMultiplyTransposeSerial(a, x.data(), 2.0, y.data());

  const auto dense = ToDense(a);
  for (int64_t j = 0; j < 5; ++j) {
    double expect = 0.25;
    for (int64_t i = 0; i < 6; ++i) expect += 2.0 * dense[i][j] * x[i];
    CHECK(y[j] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("explicit transpose matches dense transpose") {
  SeededSampler sampler(19);
  const SparseRowMatrix a = RandomMatrix(8, 12, 0.35, &sampler);
  const SparseRowMatrix at = Transpose(a);
  CHECK(at.num_rows() == 12);
  CHECK(at.num_cols == 8);
  CHECK(at.nnz() == a.nnz());
  // Columns strictly increasing per row.
  for (int64_t i = 0; i < at.num_rows(); ++i) {
    for (int64_t k = at.row_start[i] + 1; k < at.row_start[i + 1]; ++k) {
      CHECK(at.col[k] > at.col[k - 1]);
    }
  }
  const auto dense = ToDense(a);
  const auto dense_t = ToDense(at);
  for (int64_t i = 0; i < 8; ++i) {
    for (int64_t j = 0; j < 12; ++j) {
      CHECK(dense[i][j] == dense_t[j][i]);
    }
  }
}

TEST_CASE("row norms match and parallel variant is bit-identical") {
  SeededSampler sampler(23);
  const SparseRowMatrix a = RandomMatrix(17, 10, 0.4, &sampler);
  const std::vector<double> serial = RowL2NormsSerial(a);
  const std::vector<double> parallel = RowL2Norms(a);
  REQUIRE(serial.size() == 17);
  const auto dense = ToDense(a);
  for (int64_t i = 0; i < 17; ++i) {
    double sq = 0.0;
    for (double v : dense[i]) sq += v * v;
    CHECK(serial[i] == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
    CHECK(serial[i] == parallel[i]);  // exact
  }
}

TEST_CASE("dense row extraction") {
  SparseBuilder builder(3);
  builder.Add(0, 1.5);
  builder.Add(2, -2.5);
  builder.FinishRow();
  const SparseRowMatrix m = builder.Take();
  CHECK(DenseRow(m, 0) == std::vector<double>{1.5, 0.0, -2.5});
}

}  // namespace
}  // namespace jointeq
