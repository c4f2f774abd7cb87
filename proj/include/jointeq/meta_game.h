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

#ifndef JOINTEQ_META_GAME_H_
#define JOINTEQ_META_GAME_H_

#include <cstdint>
#include <map>
#include <vector>

#include "jointeq/efg.h"
#include "jointeq/normal_form.h"

namespace jointeq {

// Incremental evaluator of the restricted ("meta") game over a policy pool:
// payoff tensor cell (i_0, ..., i_{n-1}) holds the exact expected returns of
// the joint policy (pool[0][i_0], ..., pool[n-1][i_{n-1}]).
//
// Cells are cached across calls keyed by policy identity — each pool entry
// maps to the index of the first entry with an identical table — so growing
// the pool only evaluates genuinely new joint cells, duplicate pool entries
// cost nothing, and repeated tensors are bit-identical to fresh ones.
class MetaGameCache {
 public:
  explicit MetaGameCache(const EfgGame* game) : game_(game) {}

  // Payoff tensor over the current pool, shaped by pool.sizes(). New cells
  // are evaluated in parallel; evaluation order never affects values (each
  // cell is an independent exact tree walk).
  NormalFormGame Tensor(const JointPolicyPool& pool);

  int64_t cells_evaluated() const { return cells_evaluated_; }

 private:
  const EfgGame* game_;
  std::map<std::vector<int>, std::vector<double>> cache_;
  // identity_[p][i] = smallest pool index with a table equal to entry i.
  std::vector<std::vector<int>> identity_;
  int64_t cells_evaluated_ = 0;
};

}  // namespace jointeq

#endif  // JOINTEQ_META_GAME_H_
