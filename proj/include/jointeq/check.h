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

#ifndef JOINTEQ_CHECK_H_
#define JOINTEQ_CHECK_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace jointeq {

// Contract violations throw; solver-level conditions (infeasible inputs,
// iteration limits) are reported through status fields instead.
[[noreturn]] inline void FatalError(const std::string& message) {
  throw std::runtime_error(message);
}

namespace internal {
template <typename A, typename B>
[[noreturn]] void CheckFail(const char* file, int line, const char* expr,
                            const A& lhs, const B& rhs) {
  std::ostringstream oss;
  oss << file << ":" << line << " check failed: " << expr << " (" << lhs
      << " vs " << rhs << ")";
  FatalError(oss.str());
}
}  // namespace internal

#define JEQ_CHECK_OP(x, op, y)                                          \
  do {                                                                  \
    auto jeq_check_lhs = (x);                                           \
    auto jeq_check_rhs = (y);                                           \
    if (!(jeq_check_lhs op jeq_check_rhs)) {                            \
      ::jointeq::internal::CheckFail(__FILE__, __LINE__, #x " " #op " " #y, \
                                     jeq_check_lhs, jeq_check_rhs);     \
    }                                                                   \
  } while (false)

#define JEQ_CHECK_EQ(x, y) JEQ_CHECK_OP(x, ==, y)
#define JEQ_CHECK_NE(x, y) JEQ_CHECK_OP(x, !=, y)
#define JEQ_CHECK_LT(x, y) JEQ_CHECK_OP(x, <, y)
#define JEQ_CHECK_LE(x, y) JEQ_CHECK_OP(x, <=, y)
#define JEQ_CHECK_GT(x, y) JEQ_CHECK_OP(x, >, y)
#define JEQ_CHECK_GE(x, y) JEQ_CHECK_OP(x, >=, y)

#define JEQ_CHECK_TRUE(x)                                                    \
  do {                                                                       \
    if (!(x)) {                                                              \
      ::jointeq::FatalError(std::string(__FILE__) + ":" +                    \
                            std::to_string(__LINE__) + " check failed: " #x); \
    }                                                                        \
  } while (false)

}  // namespace jointeq

#endif  // JOINTEQ_CHECK_H_
