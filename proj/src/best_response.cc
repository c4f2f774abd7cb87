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

#include "jointeq/best_response.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "jointeq/check.h"
#include "jointeq/errors.h"
#include "jointeq/rng.h"

namespace jointeq {
namespace {

// Policy rows for every (player, pool index) pair a computation touches,
// resolved once so tree walks never do string lookups.
class PoolRowCache {
 public:
  PoolRowCache(const EfgGame& game, const JointPolicyPool& pool)
      : game_(game), pool_(pool), rows_(pool.num_players()) {
    for (int p = 0; p < pool.num_players(); ++p) {
      rows_[p].resize(pool.policies[p].size());
    }
  }

  const std::vector<const std::vector<double>*>& Rows(int player, int index) {
    auto& slot = rows_[player][index];
    if (slot.empty() && !game_.info_states(player).empty()) {
      slot = PolicyRowsBySlot(game_, player, pool_.policies[player][index]);
    }
    return slot;
  }

 private:
  const EfgGame& game_;
  const JointPolicyPool& pool_;
  std::vector<std::vector<std::vector<const std::vector<double>*>>> rows_;
};

const std::vector<double>& RowOrThrow(
    const std::vector<const std::vector<double>*>& rows, const EfgGame& game,
    int node_index) {
  const GameNode& node = game.node(node_index);
  const std::vector<double>* row = rows[game.info_slot(node_index)];
  if (row == nullptr) {
    throw SolverError(ErrorCode::kMissingInfoState,
                      "player " + std::to_string(node.player) +
                          " policy has no row for info state '" +
                          node.info_state + "'");
  }
  return *row;
}

// Expected return to `player` of one joint pool cell, using resolved rows.
double CellValue(const EfgGame& game, int node_index, int player,
                 const std::vector<const std::vector<double>*>* rows_by_player) {
  const GameNode& node = game.node(node_index);
  switch (node.kind) {
    case GameNode::Kind::kTerminal:
      return node.returns[player];
    case GameNode::Kind::kChance: {
      double value = 0.0;
      for (size_t i = 0; i < node.children.size(); ++i) {
        if (node.chance_probs[i] > 0.0) {
          value += node.chance_probs[i] *
                   CellValue(game, node.children[i], player, rows_by_player);
        }
      }
      return value;
    }
    case GameNode::Kind::kDecision: {
      const std::vector<double>& row =
          RowOrThrow(rows_by_player[node.player], game, node_index);
      double value = 0.0;
      for (size_t a = 0; a < node.children.size(); ++a) {
        if (row[a] > 0.0) {
          value += row[a] *
                   CellValue(game, node.children[a], player, rows_by_player);
        }
      }
      return value;
    }
  }
  return 0.0;  // unreachable
}

// The two-phase sweep shared by every best-response entry point.
class MixtureResponder {
 public:
  MixtureResponder(const EfgGame& game, const JointPolicyPool& pool,
                   int player, const OpponentMixture& mixture,
                   const TieBreak& tie)
      : game_(game), player_(player), mixture_(mixture), tie_(tie) {
    const int64_t k = static_cast<int64_t>(mixture.profiles.size());
    JEQ_CHECK_EQ(mixture.weights.size(), mixture.profiles.size());
    JEQ_CHECK_LE(k * game.num_nodes(), int64_t{200000000});
    PoolRowCache cache(game, pool);
    component_rows_.resize(k);
    for (int64_t c = 0; c < k; ++c) {
      component_rows_[c].resize(game.num_players());
      for (int q = 0; q < game.num_players(); ++q) {
        if (q == player) continue;
        component_rows_[c][q] = cache.Rows(q, mixture.profiles[c][q]);
      }
    }
    contexts_.resize(game.info_states(player).size());
    chosen_.assign(contexts_.size(), kUnprocessed);
    values_.assign(k * game.num_nodes(),
                   std::numeric_limits<double>::quiet_NaN());
  }

  BrResult Solve(double on_path_value) {
    for (size_t c = 0; c < mixture_.profiles.size(); ++c) {
      if (mixture_.weights[c] > 0.0) {
        CollectContexts(static_cast<int>(c), game_.root(),
                        mixture_.weights[c]);
      }
    }

    // Info states come sorted deepest-first, so every own decision below a
    // processed state is already fixed when its action values are read.
    const auto& decls = game_.info_states(player_);
    SeededSampler tie_sampler(tie_.seed);
    for (size_t s = 0; s < decls.size(); ++s) {
      if (contexts_[s].empty()) {
        chosen_[s] = kUniform;
        continue;
      }
      int best_action = 0;
      double best_value = ActionValue(s, 0);
      for (int a = 1; a < decls[s].num_actions; ++a) {
        const double v = ActionValue(s, a);
        if (v > best_value) {
          best_value = v;
          best_action = a;
        }
      }
      if (tie_.randomized) {
        const double band = 1e-12 * (1.0 + std::abs(best_value));
        std::vector<int> tied;
        for (int a = 0; a < decls[s].num_actions; ++a) {
          if (ActionValue(s, a) >= best_value - band) tied.push_back(a);
        }
        best_action = tied[tie_sampler.UniformInt(
            static_cast<int64_t>(tied.size()))];
      }
      chosen_[s] = best_action;
    }

    BrResult result;
    for (size_t s = 0; s < decls.size(); ++s) {
      std::vector<double> row(decls[s].num_actions, 0.0);
      if (chosen_[s] >= 0) {
        row[chosen_[s]] = 1.0;
      } else {
        row.assign(decls[s].num_actions,
                   1.0 / static_cast<double>(decls[s].num_actions));
      }
      result.policy.table[decls[s].key] = std::move(row);
    }
    double value = 0.0;
    for (size_t c = 0; c < mixture_.profiles.size(); ++c) {
      if (mixture_.weights[c] > 0.0) {
        value += mixture_.weights[c] * Value(static_cast<int>(c), game_.root());
      }
    }
    result.value = value;
    result.gap = value - on_path_value;
    return result;
  }

 private:
  static constexpr int kUnprocessed = -2;
  static constexpr int kUniform = -1;

  struct Context {
    int component;
    int node;
    double weight;  // mixture weight times chance/opponent reach
  };

  // Counterfactual pass: own actions branch without reweighting.
  void CollectContexts(int component, int node_index, double weight) {
    const GameNode& node = game_.node(node_index);
    switch (node.kind) {
      case GameNode::Kind::kTerminal:
        return;
      case GameNode::Kind::kChance:
        for (size_t i = 0; i < node.children.size(); ++i) {
          if (node.chance_probs[i] > 0.0) {
            CollectContexts(component, node.children[i],
                            weight * node.chance_probs[i]);
          }
        }
        return;
      case GameNode::Kind::kDecision: {
        if (node.player == player_) {
          contexts_[game_.info_slot(node_index)].push_back(
              {component, node_index, weight});
          for (int child : node.children) {
            CollectContexts(component, child, weight);
          }
          return;
        }
        const std::vector<double>& row =
            RowOrThrow(component_rows_[component][node.player], game_,
                       node_index);
        for (size_t a = 0; a < node.children.size(); ++a) {
          if (row[a] > 0.0) {
            CollectContexts(component, node.children[a], weight * row[a]);
          }
        }
        return;
      }
    }
  }

  double ActionValue(size_t slot, int action) {
    double q = 0.0;
    for (const Context& ctx : contexts_[slot]) {
      q += ctx.weight *
           Value(ctx.component, game_.node(ctx.node).children[action]);
    }
    return q;
  }

  // Value of a subtree under component `c`, following chosen actions at the
  // player's already-processed info states (uniform where reach was zero).
  double Value(int c, int node_index) {
    double& memo = values_[static_cast<int64_t>(c) * game_.num_nodes() +
                           node_index];
    if (!std::isnan(memo)) return memo;
    const GameNode& node = game_.node(node_index);
    double value = 0.0;
    switch (node.kind) {
      case GameNode::Kind::kTerminal:
        value = node.returns[player_];
        break;
      case GameNode::Kind::kChance:
        for (size_t i = 0; i < node.children.size(); ++i) {
          if (node.chance_probs[i] > 0.0) {
            value += node.chance_probs[i] * Value(c, node.children[i]);
          }
        }
        break;
      case GameNode::Kind::kDecision: {
        if (node.player == player_) {
          const int slot = game_.info_slot(node_index);
          JEQ_CHECK_NE(chosen_[slot], kUnprocessed);
          if (chosen_[slot] >= 0) {
            value = Value(c, node.children[chosen_[slot]]);
          } else {
            for (int child : node.children) value += Value(c, child);
            value /= static_cast<double>(node.children.size());
          }
          break;
        }
        const std::vector<double>& row =
            RowOrThrow(component_rows_[c][node.player], game_, node_index);
        for (size_t a = 0; a < node.children.size(); ++a) {
          if (row[a] > 0.0) value += row[a] * Value(c, node.children[a]);
        }
        break;
      }
    }
    memo = value;
    return value;
  }

  const EfgGame& game_;
  const int player_;
  const OpponentMixture& mixture_;
  const TieBreak tie_;
  std::vector<std::vector<std::vector<const std::vector<double>*>>>
      component_rows_;
  std::vector<std::vector<Context>> contexts_;
  std::vector<int> chosen_;
  std::vector<double> values_;
};

// Groups sigma's positive cells by opponent assignment. When `recommended`
// is >= 0 only cells whose own index matches are kept and the weights are
// conditioned (divided by the recommendation's marginal). Also accumulates
// the responder's on-path value over the same cells.
struct MarginalizedMixture {
  OpponentMixture mixture;
  double on_path = 0.0;
  double marginal = 0.0;  // recommendation mass (1 in CCE mode)
};

MarginalizedMixture MarginalizeSigma(const EfgGame& game,
                                     const JointPolicyPool& pool,
                                     const JointDistribution& sigma,
                                     int player, int recommended,
                                     const std::vector<double>* cell_values) {
  const std::vector<int> sizes = pool.sizes();
  JEQ_CHECK_EQ(static_cast<int64_t>(sigma.probs.size()), pool.num_joint());

  PoolRowCache cache(game, pool);
  std::vector<std::vector<const std::vector<double>*>> rows_by_player(
      game.num_players());

  std::map<std::vector<int>, double> grouped;
  double on_path = 0.0;
  double marginal = 0.0;
  std::vector<int> tuple(sizes.size(), 0);
  for (int64_t flat = 0; flat < static_cast<int64_t>(sigma.probs.size());
       ++flat) {
    const double prob = sigma.probs[flat];
    // Row-major unflatten, player 0 slowest.
    int64_t rest = flat;
    for (int p = static_cast<int>(sizes.size()) - 1; p >= 0; --p) {
      tuple[p] = static_cast<int>(rest % sizes[p]);
      rest /= sizes[p];
    }
    if (prob <= 0.0) continue;
    if (recommended >= 0 && tuple[player] != recommended) continue;
    marginal += prob;
    double cell_value;
    if (cell_values != nullptr) {
      cell_value = (*cell_values)[flat];
    } else {
      for (int q = 0; q < game.num_players(); ++q) {
        rows_by_player[q] = cache.Rows(q, tuple[q]);
      }
      cell_value = CellValue(game, game.root(), player, rows_by_player.data());
    }
    on_path += prob * cell_value;
    tuple[player] = -1;  // own index is marginalized out
    grouped[tuple] += prob;
  }

  MarginalizedMixture out;
  out.marginal = marginal;
  if (recommended >= 0) {
    if (marginal <= 0.0) {
      throw SolverError(ErrorCode::kZeroSupportRecommendation,
                        "recommendation " + std::to_string(recommended) +
                            " for player " + std::to_string(player) +
                            " has zero probability");
    }
    on_path /= marginal;
  }
  out.on_path = on_path;
  for (const auto& [profile, weight] : grouped) {
    out.mixture.profiles.push_back(profile);
    out.mixture.weights.push_back(recommended >= 0 ? weight / marginal
                                                   : weight);
  }
  return out;
}

}  // namespace

BrResult BestResponseToMixture(const EfgGame& game,
                               const JointPolicyPool& pool, int player,
                               const OpponentMixture& mixture,
                               double on_path_value, const TieBreak& tie) {
  JEQ_CHECK_GE(player, 0);
  JEQ_CHECK_LT(player, game.num_players());
  JEQ_CHECK_EQ(pool.num_players(), game.num_players());
  MixtureResponder responder(game, pool, player, mixture, tie);
  return responder.Solve(on_path_value);
}

BrResult BestResponseCce(const EfgGame& game, const JointPolicyPool& pool,
                         const JointDistribution& sigma, int player,
                         const std::vector<double>* cell_values,
                         const TieBreak& tie) {
  MarginalizedMixture m =
      MarginalizeSigma(game, pool, sigma, player, -1, cell_values);
  return BestResponseToMixture(game, pool, player, m.mixture, m.on_path, tie);
}

BrResult BestResponseCe(const EfgGame& game, const JointPolicyPool& pool,
                        const JointDistribution& sigma, int player,
                        int recommended,
                        const std::vector<double>* cell_values,
                        const TieBreak& tie) {
  JEQ_CHECK_GE(recommended, 0);
  JEQ_CHECK_LT(recommended, static_cast<int>(pool.policies[player].size()));
  MarginalizedMixture m =
      MarginalizeSigma(game, pool, sigma, player, recommended, cell_values);
  BrResult result =
      BestResponseToMixture(game, pool, player, m.mixture, m.on_path, tie);
  result.conditioned_on = recommended;
  return result;
}

std::vector<BrResult> BestResponseCeAll(
    const EfgGame& game, const JointPolicyPool& pool,
    const JointDistribution& sigma, int player,
    const std::vector<double>* cell_values, const TieBreak& tie) {
  const std::vector<double> marginal = sigma.Marginal(
      NormalFormGame{pool.sizes(), std::vector<std::vector<double>>(
                                       pool.num_players())},
      player);
  std::vector<BrResult> results;
  for (size_t j = 0; j < marginal.size(); ++j) {
    if (marginal[j] > 0.0) {
      // Decorrelate tie choices across recommendations.
      const TieBreak local =
          tie.randomized
              ? TieBreak::Seeded(tie.seed +
                                 0x9E3779B97F4A7C15ull * (j + 1))
              : tie;
      results.push_back(BestResponseCe(game, pool, sigma, player,
                                       static_cast<int>(j), cell_values,
                                       local));
    }
  }
  return results;
}

}  // namespace jointeq
