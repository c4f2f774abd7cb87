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
//
// Test-only oracle: the exact value of a two-player zero-sum extensive-form
// game via its sequence-form linear program. Written against the library's
// own simplex so game values can be cross-checked without trusting any of
// the equilibrium solvers under test.

#ifndef JOINTEQ_TESTS_SEQFORM_ORACLE_H_
#define JOINTEQ_TESTS_SEQFORM_ORACLE_H_

#include <cmath>
#include <vector>

#include "jointeq/check.h"
#include "jointeq/efg.h"
#include "jointeq/simplex.h"

namespace jointeq {
namespace test_oracle {

struct SequenceForm {
  // Sequence 0 is the empty sequence; sequence 1 + offset(slot) + a extends
  // the slot's parent by action a.
  std::vector<int> num_seqs;                        // per player
  std::vector<std::vector<int>> parent_seq;         // [p][slot], -1 unvisited
  std::vector<std::vector<int>> slot_seq_base;      // [p][slot]
  std::vector<std::vector<double>> payoff;          // [seq0][seq1], chance folded
};

inline void WalkSequenceForm(const EfgGame& game, int node_index, int seq0,
                             int seq1, double weight, SequenceForm* sf) {
  const GameNode& node = game.node(node_index);
  switch (node.kind) {
    case GameNode::Kind::kTerminal:
      sf->payoff[seq0][seq1] += weight * node.returns[0];
      return;
    case GameNode::Kind::kChance:
      for (size_t i = 0; i < node.children.size(); ++i) {
        if (node.chance_probs[i] > 0.0) {
          WalkSequenceForm(game, node.children[i], seq0, seq1,
                           weight * node.chance_probs[i], sf);
        }
      }
      return;
    case GameNode::Kind::kDecision: {
      const int p = node.player;
      const int slot = game.info_slot(node_index);
      const int own_seq = p == 0 ? seq0 : seq1;
      if (sf->parent_seq[p][slot] == -1) {
        sf->parent_seq[p][slot] = own_seq;
      } else {
        // Perfect recall: every node of an info state shares a parent.
        JEQ_CHECK_EQ(sf->parent_seq[p][slot], own_seq);
      }
      for (size_t a = 0; a < node.children.size(); ++a) {
        const int next = sf->slot_seq_base[p][slot] + static_cast<int>(a);
        WalkSequenceForm(game, node.children[a], p == 0 ? next : seq0,
                         p == 1 ? next : seq1, weight, sf);
      }
      return;
    }
  }
}

inline SequenceForm BuildSequenceForm(const EfgGame& game) {
  JEQ_CHECK_EQ(game.num_players(), 2);
  SequenceForm sf;
  sf.num_seqs.assign(2, 1);
  sf.parent_seq.resize(2);
  sf.slot_seq_base.resize(2);
  for (int p = 0; p < 2; ++p) {
    const auto& decls = game.info_states(p);
    sf.parent_seq[p].assign(decls.size(), -1);
    sf.slot_seq_base[p].resize(decls.size());
    for (size_t s = 0; s < decls.size(); ++s) {
      sf.slot_seq_base[p][s] = sf.num_seqs[p];
      sf.num_seqs[p] += decls[s].num_actions;
    }
  }
  sf.payoff.assign(sf.num_seqs[0], std::vector<double>(sf.num_seqs[1], 0.0));
  WalkSequenceForm(game, game.root(), 0, 0, 1.0, &sf);
  for (int p = 0; p < 2; ++p) {
    for (int parent : sf.parent_seq[p]) JEQ_CHECK_GE(parent, 0);
  }
  return sf;
}

// Game value to player 0 of a zero-sum game: maximize q_0 over realization
// plans x of player 0 and dual variables q of player 1's plan constraints,
// subject to F^T q <= A^T x and E x = e.
inline double ZeroSumGameValue(const EfgGame& game) {
  const SequenceForm sf = BuildSequenceForm(game);
  const int s0 = sf.num_seqs[0];
  const int s1 = sf.num_seqs[1];
  const int num_infosets1 = static_cast<int>(game.info_states(1).size());
  const int dual_dim = 1 + num_infosets1;
  // Variables: x (s0 entries), then q+ and q- (dual_dim each, q free).
  const int num_vars = s0 + 2 * dual_dim;

  // F[i][j]: player 1's plan constraints. Row 0 pins the empty sequence;
  // row 1+slot reads -y[parent] + sum_a y[slot extension a] = 0.
  std::vector<std::vector<double>> f(dual_dim, std::vector<double>(s1, 0.0));
  f[0][0] = 1.0;
  for (int slot = 0; slot < num_infosets1; ++slot) {
    f[1 + slot][sf.parent_seq[1][slot]] -= 1.0;
    const int base = sf.slot_seq_base[1][slot];
    const int actions = game.info_states(1)[slot].num_actions;
    for (int a = 0; a < actions; ++a) f[1 + slot][base + a] += 1.0;
  }

  LpProblem lp;
  lp.c.assign(num_vars, 0.0);
  lp.c[s0] = -1.0;             // maximize q_0 = q+_0 - q-_0
  lp.c[s0 + dual_dim] = 1.0;

  // One row per player-1 sequence j: sum_i F[i][j] q_i - sum_k A[k][j] x_k <= 0.
  lp.a_ub.assign(s1, std::vector<double>(num_vars, 0.0));
  lp.b_ub.assign(s1, 0.0);
  for (int j = 0; j < s1; ++j) {
    for (int k = 0; k < s0; ++k) lp.a_ub[j][k] = -sf.payoff[k][j];
    for (int i = 0; i < dual_dim; ++i) {
      lp.a_ub[j][s0 + i] = f[i][j];
      lp.a_ub[j][s0 + dual_dim + i] = -f[i][j];
    }
  }

  // Player 0's plan constraints E x = e.
  const int num_infosets0 = static_cast<int>(game.info_states(0).size());
  lp.a_eq.assign(1 + num_infosets0, std::vector<double>(num_vars, 0.0));
  lp.b_eq.assign(1 + num_infosets0, 0.0);
  lp.a_eq[0][0] = 1.0;
  lp.b_eq[0] = 1.0;
  for (int slot = 0; slot < num_infosets0; ++slot) {
    lp.a_eq[1 + slot][sf.parent_seq[0][slot]] -= 1.0;
    const int base = sf.slot_seq_base[0][slot];
    const int actions = game.info_states(0)[slot].num_actions;
    for (int a = 0; a < actions; ++a) lp.a_eq[1 + slot][base + a] += 1.0;
  }

  const LpResult result = SolveLp(lp);
  JEQ_CHECK_TRUE(result.status == LpStatus::kOptimal);
  return -result.objective;
}

}  // namespace test_oracle
}  // namespace jointeq

#endif  // JOINTEQ_TESTS_SEQFORM_ORACLE_H_
