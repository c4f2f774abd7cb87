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

#ifndef JOINTEQ_NORMAL_FORM_H_
#define JOINTEQ_NORMAL_FORM_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jointeq/sparse.h"

namespace jointeq {

inline constexpr double kFeasibilityTol = 1e-8;

// Joint actions are flattened row-major over players in declaration order:
// player 0 varies slowest, the last player fastest. Every module relies on
// this ordering; it is part of the public contract.
struct NormalFormGame {
  std::vector<int> actions_per_player;
  // payoffs[p][j] is the payoff to player p at flat joint action j.
  std::vector<std::vector<double>> payoffs;

  int num_players() const { return static_cast<int>(actions_per_player.size()); }
  int64_t num_joint_actions() const;

  int64_t FlatIndex(const std::vector<int>& actions) const;
  std::vector<int> UnflattenIndex(int64_t flat) const;

  // Per-player strides of the row-major layout.
  std::vector<int64_t> Strides() const;

  void Validate() const;
};

// Probabilities over flat joint actions.
struct JointDistribution {
  std::vector<double> probs;

  double Gini() const;
  // Marginal over one player's actions.
  std::vector<double> Marginal(const NormalFormGame& game, int player) const;
};

// Clamps negatives at zero and renormalizes to an exact unit sum. Raw solver
// output may carry entries down to -tol below zero; anything worse is a bug
// on the caller's side.
JointDistribution ClampAndNormalize(std::vector<double> raw,
                                    double tol = kFeasibilityTol);

double GiniImpurity(const std::vector<double>& probs);

enum class DeviationKind { kCe, kCce };

// Row labels of a constraint system: for CE rows, `recommended` is the action
// the deviation conditions on; CCE rows have recommended = -1.
struct DeviationTag {
  int player = 0;
  int recommended = -1;
  int deviation = 0;
};

// Incentive constraints in the unconditional form  A sigma <= epsilon.
// A CE row (p, a -> a') reads: the expected gain from switching the
// recommendation a to a', summed over joint actions that recommend a.
// A CCE row (p, a') sums the gain of always playing a' over following the
// recommendation.
struct ConstraintSystem {
  DeviationKind kind = DeviationKind::kCce;
  SparseRowMatrix rows;
  std::vector<double> epsilon;
  std::vector<DeviationTag> row_index;

  int64_t num_rows() const { return rows.num_rows(); }
  int64_t num_joint_actions() const { return rows.num_cols; }
};

// Builders. Epsilon is initialized to `epsilon` on every row; callers that
// need per-row values can overwrite the vector afterwards.
ConstraintSystem BuildCeConstraints(const NormalFormGame& game,
                                    double epsilon = 0.0);
ConstraintSystem BuildCceConstraints(const NormalFormGame& game,
                                     double epsilon = 0.0);

// max_i (A sigma - epsilon)_i; negative values mean slack everywhere.
double ConstraintViolation(const ConstraintSystem& cs,
                           const std::vector<double>& sigma);

// Row normalization for solver conditioning: rows scaled to unit L2 norm and
// epsilon scaled identically, which leaves the feasible set unchanged. Rows
// that are identically zero are dropped (they would otherwise blow up the
// scaling); `kept_rows` and `row_scale` describe the mapping back.
struct NormalizedSystem {
  ConstraintSystem system;
  std::vector<int64_t> kept_rows;  // indices into the original system
  std::vector<double> row_scale;   // original L2 norm of each kept row
  int64_t dropped_rows = 0;
};

NormalizedSystem NormalizeRows(const ConstraintSystem& cs);

// Repeated-action elimination. Actions of a player whose payoff slices are
// exactly equal (for all players, across all opponent profiles) collapse to
// one representative. The reduced distribution stores per-copy mass: a joint
// action of the reduced game with repeat count r carries r copies of its
// probability entry in the expansion.
struct ReductionMap {
  // original_to_reduced[p][a] = reduced action index.
  std::vector<std::vector<int>> original_to_reduced;
  // repeat_counts[p][a_reduced] = number of original copies.
  std::vector<std::vector<int>> repeat_counts;
};

struct ReducedGame {
  NormalFormGame game;
  ReductionMap map;
};

ReducedGame EliminateRepeatedActions(const NormalFormGame& game);

// Per-copy expansion of a reduced distribution back to the original game.
JointDistribution ExpandDistribution(const NormalFormGame& original,
                                     const NormalFormGame& reduced,
                                     const ReductionMap& map,
                                     const std::vector<double>& reduced_probs);

// Iterated elimination of strictly dominated actions (pure dominators only).
// Sound for equilibrium targets with epsilon <= 0; callers opt in explicitly.
struct DominanceReduction {
  NormalFormGame game;
  // kept_actions[p] lists surviving original action indices in order.
  std::vector<std::vector<int>> kept_actions;
};

DominanceReduction EliminateDominatedActions(const NormalFormGame& game);

// Welfare vector w(a) = sum_p G_p(a).
std::vector<double> WelfareVector(const NormalFormGame& game);

// Per-player expected values under a joint distribution.
std::vector<double> ExpectedValues(const NormalFormGame& game,
                                   const JointDistribution& dist);

// Plain-text game files:
//   num_players: 2
//   actions_per_player: 2 2
//   payoffs: -10 1 0 0 -10 0 1 0
// Payoffs are listed player by player, each block in flat row-major joint
// order. The loader validates the shape.
NormalFormGame LoadGameFile(const std::string& path);
NormalFormGame ParseGameText(std::istream& in);
void WriteGameFile(const NormalFormGame& game, const std::string& path);

// Small built-in matrix games used across tests and the CLI.
NormalFormGame TrafficLightsGame();
NormalFormGame MatchingPenniesGame();
NormalFormGame PrisonersDilemmaGame();

}  // namespace jointeq

#endif  // JOINTEQ_NORMAL_FORM_H_
