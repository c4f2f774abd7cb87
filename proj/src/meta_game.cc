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

#include "jointeq/meta_game.h"

#include <set>
#include <utility>

#include "jointeq/check.h"

namespace jointeq {

NormalFormGame MetaGameCache::Tensor(const JointPolicyPool& pool) {
  const int num_players = pool.num_players();
  JEQ_CHECK_EQ(num_players, game_->num_players());
  const std::vector<int> sizes = pool.sizes();
  for (int s : sizes) JEQ_CHECK_GE(s, 1);

  // Refresh identity ids; pools only grow, so ids of old entries are stable
  // and only the new tail needs comparisons.
  identity_.resize(num_players);
  for (int p = 0; p < num_players; ++p) {
    JEQ_CHECK_LE(identity_[p].size(), pool.policies[p].size());
    for (size_t i = identity_[p].size(); i < pool.policies[p].size(); ++i) {
      int id = static_cast<int>(i);
      for (size_t j = 0; j < i; ++j) {
        if (pool.policies[p][j] == pool.policies[p][i]) {
          id = static_cast<int>(j);
          break;
        }
      }
      identity_[p].push_back(id);
    }
  }

  NormalFormGame meta;
  meta.actions_per_player = sizes;
  const int64_t cells = meta.num_joint_actions();
  meta.payoffs.assign(num_players, std::vector<double>(cells, 0.0));

  // Identity key per cell, plus the set of keys not yet cached.
  std::vector<std::vector<int>> keys(cells, std::vector<int>(num_players));
  std::set<std::vector<int>> missing;
  {
    std::vector<int> tuple(num_players, 0);
    for (int64_t flat = 0; flat < cells; ++flat) {
      int64_t rest = flat;
      for (int p = num_players - 1; p >= 0; --p) {
        tuple[p] = static_cast<int>(rest % sizes[p]);
        rest /= sizes[p];
      }
      for (int p = 0; p < num_players; ++p) {
        keys[flat][p] = identity_[p][tuple[p]];
      }
      if (cache_.find(keys[flat]) == cache_.end()) {
        missing.insert(keys[flat]);
      }
    }
  }

  // Evaluate new cells. Each is an independent exact walk of the immutable
  // tree, so the parallel loop cannot affect values, only wall time.
  std::vector<const std::vector<int>*> todo;
  todo.reserve(missing.size());
  for (const auto& key : missing) todo.push_back(&key);
  std::vector<std::vector<double>> fresh(todo.size());
#pragma omp parallel for schedule(dynamic)
  for (int64_t t = 0; t < static_cast<int64_t>(todo.size()); ++t) {
    std::vector<const TabularPolicy*> profile(num_players);
    for (int p = 0; p < num_players; ++p) {
      profile[p] = &pool.policies[p][(*todo[t])[p]];
    }
    fresh[t] = ExpectedReturn(*game_, profile);
  }
  for (size_t t = 0; t < todo.size(); ++t) {
    cache_.emplace(*todo[t], std::move(fresh[t]));
  }
  cells_evaluated_ += static_cast<int64_t>(todo.size());

  for (int64_t flat = 0; flat < cells; ++flat) {
    const std::vector<double>& returns = cache_.at(keys[flat]);
    for (int p = 0; p < num_players; ++p) {
      meta.payoffs[p][flat] = returns[p];
    }
  }
  return meta;
}

}  // namespace jointeq
