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
//
// Times the OpenMP sparse kernels against their serial reference
// implementations on deviation-gain systems of random games, and verifies
// the bit-for-bit agreement the parallel variants promise. Run without
// arguments; set OMP_NUM_THREADS to control the parallel side.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "jointeq/normal_form.h"
#include "jointeq/rng.h"
#include "jointeq/sparse.h"

namespace jointeq {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

NormalFormGame RandomGame(const std::vector<int>& shape, uint64_t seed) {
  SeededSampler sampler(seed);
  NormalFormGame game;
  game.actions_per_player = shape;
  game.payoffs.resize(shape.size());
  int64_t cells = 1;
  for (int a : shape) cells *= a;
  for (auto& table : game.payoffs) {
    table.resize(cells);
    for (double& v : table) v = sampler.UniformDouble() * 2.0 - 1.0;
  }
  game.Validate();
  return game;
}

template <typename Fn>
double TimeBest(int repeats, const Fn& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    const double ms = MsSince(start);
    if (ms < best) best = ms;
  }
  return best;
}

void BenchOne(const std::vector<int>& shape, uint64_t seed) {
  const NormalFormGame game = RandomGame(shape, seed);
  const ConstraintSystem cs = BuildCceConstraints(game, 0.0);
  const int64_t n = cs.num_joint_actions();
  const int64_t rows = cs.num_rows();

  SeededSampler sampler(seed + 1);
  std::vector<double> x(n);
  for (double& v : x) v = sampler.UniformDouble();
  std::vector<double> y_serial(rows, 0.0);
  std::vector<double> y_parallel(rows, 0.0);

  const int repeats = 5;
  const double serial_ms =
      TimeBest(repeats, [&] { MultiplySerial(cs.rows, x.data(), y_serial.data()); });
  const double parallel_ms =
      TimeBest(repeats, [&] { Multiply(cs.rows, x.data(), y_parallel.data()); });

  int64_t mismatches = 0;
  for (int64_t i = 0; i < rows; ++i) {
    if (y_serial[i] != y_parallel[i]) ++mismatches;
  }

  const double norm_serial_ms =
      TimeBest(repeats, [&] { (void)RowL2NormsSerial(cs.rows); });
  const double norm_parallel_ms =
      TimeBest(repeats, [&] { (void)RowL2Norms(cs.rows); });

  std::printf(
      "shape=");
  for (std::size_t p = 0; p < shape.size(); ++p) {
    std::printf("%s%d", p == 0 ? "" : "x", shape[p]);
  }
  std::printf(
      " rows=%lld nnz=%lld | multiply serial %.3f ms, parallel %.3f ms "
      "(x%.2f) | row_norms serial %.3f ms, parallel %.3f ms (x%.2f) | "
      "bit_mismatches=%lld\n",
      static_cast<long long>(rows), static_cast<long long>(cs.rows.nnz()),
      serial_ms, parallel_ms,
      parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0, norm_serial_ms,
      norm_parallel_ms,
      norm_parallel_ms > 0.0 ? norm_serial_ms / norm_parallel_ms : 0.0,
      static_cast<long long>(mismatches));
}

}  // namespace
}  // namespace jointeq

int main() {
  // Sizes span the regimes the solvers meet: small meta-games, mid-size
  // joint systems, and a large system where row-parallelism pays off.
  jointeq::BenchOne({8, 8}, 11);
  jointeq::BenchOne({16, 16, 4}, 12);
  jointeq::BenchOne({24, 24, 24}, 13);
  jointeq::BenchOne({40, 40, 40}, 14);
  return 0;
}
