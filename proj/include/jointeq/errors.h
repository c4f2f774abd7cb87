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

#ifndef JOINTEQ_ERRORS_H_
#define JOINTEQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace jointeq {

// Failure taxonomy shared by the solvers and the CLI (which maps codes to
// process exit codes).
enum class ErrorCode {
  kInfeasible,                  // requested polytope is empty (ε below min-ε)
  kIterationLimit,              // iterative solver hit its iteration budget
  kFullSupportViolated,         // full-support solve produced σ outside the simplex interior
  kZeroSupportRecommendation,   // CE best response queried on a zero-probability recommendation
  kMissingInfoState,            // policy lookup for an unknown information state
  kUnbounded,                   // LP unbounded; impossible on these polytopes => internal bug
};

const char* ErrorCodeName(ErrorCode code);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jointeq

#endif  // JOINTEQ_ERRORS_H_
