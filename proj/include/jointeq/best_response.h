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

#ifndef JOINTEQ_BEST_RESPONSE_H_
#define JOINTEQ_BEST_RESPONSE_H_

#include <vector>

#include "jointeq/efg.h"
#include "jointeq/normal_form.h"

namespace jointeq {

// Outcome of one exact best-response computation. `value` is the expected
// return of the returned policy against the opponent mixture it was computed
// for; `gap` = value minus the responder's on-path value under the joint
// distribution. The gap is reported signed: correlation can make the on-path
// value exceed the best response to the marginalized opponents, so callers
// that want the equilibrium-gap metric clamp at zero themselves.
struct BrResult {
  TabularPolicy policy;
  double value = 0.0;
  double gap = 0.0;
  // Pool index of the recommended policy the response conditions on;
  // -1 outside CE mode.
  int conditioned_on = -1;
};

// A weighted set of opponent assignments: component c plays
// pool.policies[q][profiles[c][q]] for every opponent q; the entry at the
// responder's own position is ignored. Weights are nonnegative and sum to 1.
struct OpponentMixture {
  std::vector<std::vector<int>> profiles;
  std::vector<double> weights;
};

// Selection among tied best actions. Every choice yields an exact best
// response, but the always-lowest-index rule never produces policies whose
// behavior varies across equally-good branches — iterative trainers then
// miss, say, signaling policies whose payoff ties that of silence against
// the current opponents. The seeded rule picks uniformly among the actions
// within a relative 1e-12 band of the maximum, deterministically per seed.
struct TieBreak {
  bool randomized = false;
  uint64_t seed = 0;

  static TieBreak LowestIndex() { return TieBreak{}; }
  static TieBreak Seeded(uint64_t seed) { return TieBreak{true, seed}; }
};

// Exact best response of `player` to a mixture of opponent joint policies.
// The responder may condition only on its own information, so the
// computation sweeps the player's info states from the deepest up, weighing
// each by mixture-and-chance counterfactual reach. Tied action values break
// per `tie`; info states with zero reach under every component get uniform
// rows. `on_path_value` seeds the gap field.
BrResult BestResponseToMixture(const EfgGame& game,
                               const JointPolicyPool& pool, int player,
                               const OpponentMixture& mixture,
                               double on_path_value,
                               const TieBreak& tie = TieBreak::LowestIndex());

// Best response against sigma with the responder's own recommendation
// marginalized out. sigma lives on the pool's joint index space (row-major,
// player 0 slowest). `cell_values` optionally supplies the responder's
// expected return per joint cell (a meta-game payoff row) to avoid
// re-walking the tree for the on-path value.
BrResult BestResponseCce(const EfgGame& game, const JointPolicyPool& pool,
                         const JointDistribution& sigma, int player,
                         const std::vector<double>* cell_values = nullptr,
                         const TieBreak& tie = TieBreak::LowestIndex());

// Best response conditioned on one recommended own policy: opponents are
// weighted by sigma(. | recommended). Throws ZeroSupportRecommendation when
// the recommendation has zero marginal probability.
BrResult BestResponseCe(const EfgGame& game, const JointPolicyPool& pool,
                        const JointDistribution& sigma, int player,
                        int recommended,
                        const std::vector<double>* cell_values = nullptr,
                        const TieBreak& tie = TieBreak::LowestIndex());

// All positive-support recommendations for `player`, in index order.
std::vector<BrResult> BestResponseCeAll(
    const EfgGame& game, const JointPolicyPool& pool,
    const JointDistribution& sigma, int player,
    const std::vector<double>* cell_values = nullptr,
    const TieBreak& tie = TieBreak::LowestIndex());

}  // namespace jointeq

#endif  // JOINTEQ_BEST_RESPONSE_H_
