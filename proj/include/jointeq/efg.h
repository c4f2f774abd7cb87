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

#ifndef JOINTEQ_EFG_H_
#define JOINTEQ_EFG_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace jointeq {

// One node of an extensive-form game tree. Nodes live in a flat arena owned
// by EfgGame; children refer to arena indices and must point forward (child
// index strictly greater than the parent's), which makes the arena a
// topologically ordered tree by construction.
struct GameNode {
  enum class Kind { kChance, kDecision, kTerminal };

  Kind kind = Kind::kTerminal;
  // Decision nodes only.
  int player = -1;
  std::string info_state;
  // Chance and decision nodes. For decision nodes, the child order defines
  // the action numbering.
  std::vector<int> children;
  // Chance nodes only, aligned with children.
  std::vector<double> chance_probs;
  // Terminal nodes only, one entry per player.
  std::vector<double> returns;
};

// Per-player information state listing. `own_depth` counts the player's own
// decision nodes strictly above each member node; it is equal across the
// members (a perfect-recall prerequisite, validated at construction) and
// orders the best-response sweep.
struct InfoStateDecl {
  std::string key;
  int num_actions = 0;
  int own_depth = 0;
  std::vector<int> nodes;  // arena indices, in discovery order
};

class EfgGame {
 public:
  EfgGame(std::string name, int num_players, std::vector<GameNode> nodes,
          int root = 0);

  const std::string& name() const { return name_; }
  int num_players() const { return num_players_; }
  int root() const { return root_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const GameNode& node(int index) const { return nodes_[index]; }
  const std::vector<GameNode>& nodes() const { return nodes_; }

  // Info states of one player, sorted by decreasing own_depth (ties broken
  // by discovery order). The index into this vector is the "slot" used
  // throughout the best-response and meta-game code.
  const std::vector<InfoStateDecl>& info_states(int player) const;
  // Slot of a decision node's info state within info_states(node.player).
  int info_slot(int node_index) const { return node_slot_[node_index]; }
  // Slot lookup by key; -1 when the key is unknown.
  int FindSlot(int player, const std::string& key) const;

 private:
  void BuildIndex();

  std::string name_;
  int num_players_ = 0;
  int root_ = 0;
  std::vector<GameNode> nodes_;
  std::vector<std::vector<InfoStateDecl>> info_states_;
  std::vector<int> node_slot_;
};

// Behavioral policy of one player: info-state key -> distribution over that
// state's actions. The ordered map gives policies a canonical iteration
// order, exact equality, and deterministic serialization.
struct TabularPolicy {
  std::map<std::string, std::vector<double>> table;

  friend bool operator==(const TabularPolicy& a, const TabularPolicy& b) {
    return a.table == b.table;
  }
};

// Uniform distribution at every info state of `player`.
TabularPolicy UniformPolicy(const EfgGame& game, int player);

// Canonical form used for policy identity: every info state the player
// cannot reach under its own policy (regardless of chance or opponent
// behavior) is rewritten to uniform, and the table domain is restricted to
// exactly the game's info states for the player. Expected returns are
// unchanged: rewritten states have zero reach probability under any
// opponents. Throws MissingInfoState when an own-reachable state lacks a row.
TabularPolicy CanonicalizePolicy(const EfgGame& game, int player,
                                 const TabularPolicy& policy);

// Exact expected return per player under one policy per player: a full
// depth-first expectation over chance and policy stochasticity. Zero
// probability branches are skipped, so policies only need rows at states
// with positive reach. Throws MissingInfoState otherwise.
std::vector<double> ExpectedReturn(
    const EfgGame& game, const std::vector<const TabularPolicy*>& profile);
std::vector<double> ExpectedReturn(const EfgGame& game,
                                   const std::vector<TabularPolicy>& profile);

// Policy rows resolved against the game's slot numbering: entry s points to
// the policy's distribution for info_states(player)[s].key, or null when the
// policy lacks that row. Used by evaluation loops to avoid repeated string
// lookups.
std::vector<const std::vector<double>*> PolicyRowsBySlot(
    const EfgGame& game, int player, const TabularPolicy& policy);

// Per-player ordered policy lists grown by JPSRO. Multiset semantics by
// default: duplicates are retained and the insertion log keeps one
// iteration stamp per entry.
struct JointPolicyPool {
  std::vector<std::vector<TabularPolicy>> policies;
  std::vector<std::vector<int>> added_at_iteration;

  JointPolicyPool() = default;
  explicit JointPolicyPool(int num_players)
      : policies(num_players), added_at_iteration(num_players) {}

  int num_players() const { return static_cast<int>(policies.size()); }
  std::vector<int> sizes() const;
  // Product of per-player sizes: the joint index space, row-major with
  // player 0 varying slowest (the NormalFormGame convention).
  int64_t num_joint() const;

  // Appends unconditionally (multiset semantics); returns the new index.
  int Add(int player, TabularPolicy policy, int iteration);
  // Set semantics: returns the index of an existing identical policy, or
  // appends. The bool reports whether an insertion happened.
  std::pair<int, bool> AddIfNew(int player, TabularPolicy policy,
                                int iteration);

  // Number of distinct policy tables per player (exact equality).
  std::vector<int> UniqueCounts() const;
};

// Plain-text policy table, one line per info state:
//   <info_state_key>\t<p_0> <p_1> ...
// Probabilities print with enough digits to round-trip exactly. Keys must
// not contain tab or newline characters.
void WritePolicyText(const TabularPolicy& policy, std::ostream& out);
TabularPolicy ParsePolicyText(std::istream& in);
void WritePolicyFile(const TabularPolicy& policy, const std::string& path);
TabularPolicy LoadPolicyFile(const std::string& path);

}  // namespace jointeq

#endif  // JOINTEQ_EFG_H_
