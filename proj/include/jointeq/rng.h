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

#ifndef JOINTEQ_RNG_H_
#define JOINTEQ_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

#include "jointeq/check.h"

namespace jointeq {

// Seeded sampler built on mt19937_64 with explicit inverse-transform
// sampling. The standard <random> distributions are implementation-defined,
// which would break the byte-identical rerun guarantee, so the few
// distributions needed are spelled out here.
class SeededSampler {
 public:
  explicit SeededSampler(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of mantissa.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  int64_t UniformInt(int64_t n) {
    JEQ_CHECK_GT(n, 0);
    // Rejection sampling to avoid modulo bias.
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int64_t>(x % un);
  }

  // Exponential(1) via inverse CDF; Gamma(1,1) draws for Dirichlet sampling.
  double Exponential() {
    double u;
    do {
      u = UniformDouble();
    } while (u <= 0.0);
    return -std::log(u);
  }

  // Standard normal via Box-Muller (one draw per call, no cached spare, so
  // the stream is a pure function of the call count).
  double Gaussian() {
    double u1;
    do {
      u1 = UniformDouble();
    } while (u1 <= 0.0);
    const double u2 = UniformDouble();
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  uint64_t RawBits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace jointeq

#endif  // JOINTEQ_RNG_H_
