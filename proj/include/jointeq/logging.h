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

#ifndef JOINTEQ_LOGGING_H_
#define JOINTEQ_LOGGING_H_

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

namespace jointeq {

// Verbosity is read once from JOINTEQ_VERBOSITY: 0 silent (default),
// 1 progress notes, 2 solver internals.
inline int LogVerbosity() {
  static const int level = [] {
    const char* env = std::getenv("JOINTEQ_VERBOSITY");
    if (env == nullptr) return 0;
    return std::atoi(env);
  }();
  return level;
}

template <typename... Args>
void LogInfo(Args&&... args) {
  if (LogVerbosity() < 1) return;
  std::ostringstream oss;
  (oss << ... << args);
  std::cerr << "[jointeq] " << oss.str() << "\n";
}

template <typename... Args>
void LogDebug(Args&&... args) {
  if (LogVerbosity() < 2) return;
  std::ostringstream oss;
  (oss << ... << args);
  std::cerr << "[jointeq:debug] " << oss.str() << "\n";
}

}  // namespace jointeq

#endif  // JOINTEQ_LOGGING_H_
