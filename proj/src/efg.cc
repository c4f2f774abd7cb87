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

#include "jointeq/efg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "jointeq/check.h"
#include "jointeq/errors.h"

namespace jointeq {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EfgGame::EfgGame(std::string name, int num_players,
                 std::vector<GameNode> nodes, int root)
    : name_(std::move(name)),
      num_players_(num_players),
      root_(root),
      nodes_(std::move(nodes)) {
  JEQ_CHECK_GE(num_players_, 1);
  JEQ_CHECK_TRUE(!nodes_.empty());
  JEQ_CHECK_GE(root_, 0);
  JEQ_CHECK_LT(root_, static_cast<int>(nodes_.size()));
  BuildIndex();
}

void EfgGame::BuildIndex() {
  const int n = static_cast<int>(nodes_.size());
  std::vector<int> parent(n, -1);
  std::vector<int> own_depth(n, 0);
  std::vector<char> visited(n, 0);

  // The forward-pointing child invariant makes index order a topological
  // order, so one pass both validates the tree and computes own depths.
  JEQ_CHECK_EQ(root_, 0);
  visited[root_] = 1;
  std::vector<std::vector<int>> own_path_depth(
      n, std::vector<int>(num_players_, 0));
  for (int i = 0; i < n; ++i) {
    JEQ_CHECK_TRUE(visited[i]);  // every arena node reachable from the root
    const GameNode& node = nodes_[i];
    switch (node.kind) {
      case GameNode::Kind::kTerminal: {
        JEQ_CHECK_TRUE(node.children.empty());
        JEQ_CHECK_EQ(static_cast<int>(node.returns.size()), num_players_);
        for (double r : node.returns) JEQ_CHECK_TRUE(std::isfinite(r));
        continue;
      }
      case GameNode::Kind::kChance: {
        JEQ_CHECK_TRUE(!node.children.empty());
        JEQ_CHECK_EQ(node.chance_probs.size(), node.children.size());
        double sum = 0.0;
        for (double p : node.chance_probs) {
          JEQ_CHECK_GE(p, 0.0);
          sum += p;
        }
        JEQ_CHECK_LE(std::abs(sum - 1.0), 1e-9);
        break;
      }
      case GameNode::Kind::kDecision: {
        JEQ_CHECK_TRUE(!node.children.empty());
        JEQ_CHECK_GE(node.player, 0);
        JEQ_CHECK_LT(node.player, num_players_);
        JEQ_CHECK_TRUE(!node.info_state.empty());
        own_depth[i] = own_path_depth[i][node.player];
        break;
      }
    }
    for (int child : node.children) {
      JEQ_CHECK_GT(child, i);  // forward pointing: the arena is a tree
      JEQ_CHECK_LT(child, n);
      JEQ_CHECK_TRUE(!visited[child]);  // single parent
      visited[child] = 1;
      parent[child] = i;
      own_path_depth[child] = own_path_depth[i];
      if (node.kind == GameNode::Kind::kDecision) {
        own_path_depth[child][node.player] += 1;
      }
    }
  }

  // Group decision nodes into info states and check the consistency the
  // best-response sweep relies on: one player, one action count, and one own
  // depth per key.
  info_states_.assign(num_players_, {});
  node_slot_.assign(n, -1);
  std::vector<std::map<std::string, int>> key_to_slot(num_players_);
  for (int i = 0; i < n; ++i) {
    const GameNode& node = nodes_[i];
    if (node.kind != GameNode::Kind::kDecision) continue;
    auto& slots = key_to_slot[node.player];
    auto it = slots.find(node.info_state);
    if (it == slots.end()) {
      InfoStateDecl decl;
      decl.key = node.info_state;
      decl.num_actions = static_cast<int>(node.children.size());
      decl.own_depth = own_depth[i];
      decl.nodes = {i};
      info_states_[node.player].push_back(std::move(decl));
      it = slots.emplace(node.info_state,
                         static_cast<int>(info_states_[node.player].size()) - 1)
               .first;
    } else {
      InfoStateDecl& decl = info_states_[node.player][it->second];
      JEQ_CHECK_EQ(decl.num_actions, static_cast<int>(node.children.size()));
      JEQ_CHECK_EQ(decl.own_depth, own_depth[i]);
      decl.nodes.push_back(i);
    }
    node_slot_[i] = it->second;
  }

  // Deepest own infostates first; stable to keep discovery order on ties.
  for (int p = 0; p < num_players_; ++p) {
    std::vector<int> order(info_states_[p].size());
    for (size_t s = 0; s < order.size(); ++s) order[s] = static_cast<int>(s);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return info_states_[p][a].own_depth > info_states_[p][b].own_depth;
    });
    std::vector<InfoStateDecl> sorted;
    sorted.reserve(order.size());
    std::vector<int> new_slot(order.size());
    for (size_t s = 0; s < order.size(); ++s) {
      new_slot[order[s]] = static_cast<int>(s);
      sorted.push_back(std::move(info_states_[p][order[s]]));
    }
    info_states_[p] = std::move(sorted);
    for (int i = 0; i < n; ++i) {
      if (nodes_[i].kind == GameNode::Kind::kDecision && nodes_[i].player == p) {
        node_slot_[i] = new_slot[node_slot_[i]];
      }
    }
  }
}

const std::vector<InfoStateDecl>& EfgGame::info_states(int player) const {
  JEQ_CHECK_GE(player, 0);
  JEQ_CHECK_LT(player, num_players_);
  return info_states_[player];
}

int EfgGame::FindSlot(int player, const std::string& key) const {
  const auto& decls = info_states(player);
  for (size_t s = 0; s < decls.size(); ++s) {
    if (decls[s].key == key) return static_cast<int>(s);
  }
  return -1;
}

TabularPolicy UniformPolicy(const EfgGame& game, int player) {
  TabularPolicy policy;
  for (const InfoStateDecl& decl : game.info_states(player)) {
    policy.table[decl.key] = std::vector<double>(
        decl.num_actions, 1.0 / static_cast<double>(decl.num_actions));
  }
  return policy;
}

TabularPolicy CanonicalizePolicy(const EfgGame& game, int player,
                                 const TabularPolicy& policy) {
  // Own reach: product of the player's own action probabilities along the
  // path; chance and opponent moves count as reachable whenever their
  // probability model allows them at all (chance zeros prune).
  std::vector<char> reachable(game.info_states(player).size(), 0);
  struct Item {
    int node;
    double own_reach;
  };
  std::vector<Item> stack = {{game.root(), 1.0}};
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const GameNode& node = game.node(item.node);
    switch (node.kind) {
      case GameNode::Kind::kTerminal:
        break;
      case GameNode::Kind::kChance:
        for (size_t i = 0; i < node.children.size(); ++i) {
          if (node.chance_probs[i] > 0.0) {
            stack.push_back({node.children[i], item.own_reach});
          }
        }
        break;
      case GameNode::Kind::kDecision: {
        if (node.player != player) {
          for (int child : node.children) {
            stack.push_back({child, item.own_reach});
          }
          break;
        }
        const int slot = game.info_slot(item.node);
        if (item.own_reach > 0.0) reachable[slot] = 1;
        auto it = policy.table.find(node.info_state);
        if (it == policy.table.end()) {
          if (item.own_reach > 0.0) {
            throw SolverError(ErrorCode::kMissingInfoState,
                              "policy has no row for reachable info state '" +
                                  node.info_state + "'");
          }
          break;  // unreachable and absent: becomes uniform below
        }
        JEQ_CHECK_EQ(it->second.size(), node.children.size());
        for (size_t a = 0; a < node.children.size(); ++a) {
          const double p = it->second[a];
          if (item.own_reach * p > 0.0) {
            stack.push_back({node.children[a], item.own_reach * p});
          }
        }
        break;
      }
    }
  }

  TabularPolicy out;
  const auto& decls = game.info_states(player);
  for (size_t s = 0; s < decls.size(); ++s) {
    if (reachable[s]) {
      out.table[decls[s].key] = policy.table.at(decls[s].key);
    } else {
      out.table[decls[s].key] = std::vector<double>(
          decls[s].num_actions,
          1.0 / static_cast<double>(decls[s].num_actions));
    }
  }
  return out;
}

namespace {

void AccumulateReturn(const EfgGame& game, int node_index, double weight,
                      const std::vector<const TabularPolicy*>& profile,
                      std::vector<double>* out) {
  const GameNode& node = game.node(node_index);
  switch (node.kind) {
    case GameNode::Kind::kTerminal:
      for (size_t p = 0; p < node.returns.size(); ++p) {
        (*out)[p] += weight * node.returns[p];
      }
      return;
    case GameNode::Kind::kChance:
      for (size_t i = 0; i < node.children.size(); ++i) {
        if (node.chance_probs[i] > 0.0) {
          AccumulateReturn(game, node.children[i],
                           weight * node.chance_probs[i], profile, out);
        }
      }
      return;
    case GameNode::Kind::kDecision: {
      const TabularPolicy& policy = *profile[node.player];
      auto it = policy.table.find(node.info_state);
      if (it == policy.table.end()) {
        throw SolverError(ErrorCode::kMissingInfoState,
                          "player " + std::to_string(node.player) +
                              " policy has no row for info state '" +
                              node.info_state + "'");
      }
      JEQ_CHECK_EQ(it->second.size(), node.children.size());
      for (size_t a = 0; a < node.children.size(); ++a) {
        if (it->second[a] > 0.0) {
          AccumulateReturn(game, node.children[a], weight * it->second[a],
                           profile, out);
        }
      }
      return;
    }
  }
}

}  // namespace

std::vector<double> ExpectedReturn(
    const EfgGame& game, const std::vector<const TabularPolicy*>& profile) {
  JEQ_CHECK_EQ(static_cast<int>(profile.size()), game.num_players());
  std::vector<double> out(game.num_players(), 0.0);
  AccumulateReturn(game, game.root(), 1.0, profile, &out);
  return out;
}

std::vector<double> ExpectedReturn(const EfgGame& game,
                                   const std::vector<TabularPolicy>& profile) {
  std::vector<const TabularPolicy*> ptrs;
  ptrs.reserve(profile.size());
  for (const TabularPolicy& p : profile) ptrs.push_back(&p);
  return ExpectedReturn(game, ptrs);
}

std::vector<const std::vector<double>*> PolicyRowsBySlot(
    const EfgGame& game, int player, const TabularPolicy& policy) {
  const auto& decls = game.info_states(player);
  std::vector<const std::vector<double>*> rows(decls.size(), nullptr);
  for (size_t s = 0; s < decls.size(); ++s) {
    auto it = policy.table.find(decls[s].key);
    if (it != policy.table.end()) {
      JEQ_CHECK_EQ(static_cast<int>(it->second.size()), decls[s].num_actions);
      rows[s] = &it->second;
    }
  }
  return rows;
}

std::vector<int> JointPolicyPool::sizes() const {
  std::vector<int> out(policies.size());
  for (size_t p = 0; p < policies.size(); ++p) {
    out[p] = static_cast<int>(policies[p].size());
  }
  return out;
}

int64_t JointPolicyPool::num_joint() const {
  int64_t n = 1;
  for (const auto& list : policies) n *= static_cast<int64_t>(list.size());
  return n;
}

int JointPolicyPool::Add(int player, TabularPolicy policy, int iteration) {
  JEQ_CHECK_GE(player, 0);
  JEQ_CHECK_LT(player, num_players());
  policies[player].push_back(std::move(policy));
  added_at_iteration[player].push_back(iteration);
  return static_cast<int>(policies[player].size()) - 1;
}

std::pair<int, bool> JointPolicyPool::AddIfNew(int player,
                                               TabularPolicy policy,
                                               int iteration) {
  JEQ_CHECK_GE(player, 0);
  JEQ_CHECK_LT(player, num_players());
  for (size_t i = 0; i < policies[player].size(); ++i) {
    if (policies[player][i] == policy) {
      return {static_cast<int>(i), false};
    }
  }
  return {Add(player, std::move(policy), iteration), true};
}

std::vector<int> JointPolicyPool::UniqueCounts() const {
  std::vector<int> out(policies.size(), 0);
  for (size_t p = 0; p < policies.size(); ++p) {
    for (size_t i = 0; i < policies[p].size(); ++i) {
      bool seen = false;
      for (size_t j = 0; j < i && !seen; ++j) {
        seen = policies[p][j] == policies[p][i];
      }
      if (!seen) ++out[p];
    }
  }
  return out;
}

void WritePolicyText(const TabularPolicy& policy, std::ostream& out) {
  for (const auto& [key, row] : policy.table) {
    JEQ_CHECK_TRUE(key.find('\t') == std::string::npos &&
                   key.find('\n') == std::string::npos);
    out << key << '\t';
    for (size_t a = 0; a < row.size(); ++a) {
      if (a > 0) out << ' ';
      out << FormatDouble(row[a]);
    }
    out << '\n';
  }
}

TabularPolicy ParsePolicyText(std::istream& in) {
  TabularPolicy policy;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    JEQ_CHECK_TRUE(tab != std::string::npos);
    const std::string key = line.substr(0, tab);
    JEQ_CHECK_TRUE(!key.empty());
    std::vector<double> row;
    const char* cursor = line.c_str() + tab + 1;
    char* end = nullptr;
    for (double v = std::strtod(cursor, &end); cursor != end;
         v = std::strtod(cursor, &end)) {
      row.push_back(v);
      cursor = end;
    }
    JEQ_CHECK_TRUE(!row.empty());
    JEQ_CHECK_TRUE(policy.table.emplace(key, std::move(row)).second);
  }
  return policy;
}

void WritePolicyFile(const TabularPolicy& policy, const std::string& path) {
  std::ofstream out(path);
  JEQ_CHECK_TRUE(out.good());
  WritePolicyText(policy, out);
  JEQ_CHECK_TRUE(out.good());
}

TabularPolicy LoadPolicyFile(const std::string& path) {
  std::ifstream in(path);
  JEQ_CHECK_TRUE(in.good());
  return ParsePolicyText(in);
}

}  // namespace jointeq
