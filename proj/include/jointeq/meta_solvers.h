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

#ifndef JOINTEQ_META_SOLVERS_H_
#define JOINTEQ_META_SOLVERS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jointeq/mg_solver.h"
#include "jointeq/normal_form.h"

namespace jointeq {

// Capability flags of a meta-solver, mirrored in the CLI listing.
struct MetaSolverFlags {
  bool joint = false;        // output may correlate players
  bool cce = false;          // output is a coarse correlated equilibrium
  bool ce = false;           // output is a correlated equilibrium
  bool max_value = false;    // maximizes welfare among its target set
  bool max_entropy = false;  // maximizes a spread objective (Gini here)
  bool randomized = false;   // output depends on the seed
  // The equilibrium guarantee holds only up to a relaxed epsilon (the
  // epsilon-family members).
  bool approximate = false;
};

struct MetaSolverContext {
  uint64_t seed = 0;
  // Tolerances forwarded to the MG solvers. epsilon_mode inside is ignored
  // (each registry entry fixes its own mode), and so is the engine choice:
  // small reduced systems run on the exact active-set QP, large ones on the
  // first-order dual engine.
  SolverConfig solver;
};

using MetaSolverFn = std::function<JointDistribution(
    const NormalFormGame&, const MetaSolverContext&)>;

struct MetaSolverEntry {
  std::string name;
  MetaSolverFlags flags;
  // Null for known-external solvers that are listed but not implemented.
  MetaSolverFn fn;
  std::string note;
};

// Registers (or replaces) a meta-solver under entry.name. Built-ins are
// registered lazily on first lookup; plug-ins may be added at any time.
void RegisterMetaSolver(const MetaSolverEntry& entry);

// Lookup; throws on unknown keys and on listed-but-external solvers (with
// the entry's note in the message).
const MetaSolverEntry& FindMetaSolver(const std::string& name);

// Returns true if the key exists and is callable.
bool MetaSolverAvailable(const std::string& name);

// All entries (including external stubs), sorted by name.
std::vector<MetaSolverEntry> ListMetaSolvers();

// Convenience: run a registered solver on a game.
JointDistribution RunMetaSolver(const std::string& name,
                                const NormalFormGame& game,
                                const MetaSolverContext& context);

}  // namespace jointeq

#endif  // JOINTEQ_META_SOLVERS_H_
