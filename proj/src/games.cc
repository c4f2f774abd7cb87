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

#include "jointeq/games.h"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "jointeq/check.h"

namespace jointeq {
namespace {

// Shared arena builder: reserve a node, fill it, then append the children so
// that every child index is greater than its parent's.
struct TreeBuilder {
  std::vector<GameNode> nodes;

  int Reserve() {
    nodes.emplace_back();
    return static_cast<int>(nodes.size()) - 1;
  }
};

// ---------------------------------------------------------------------------
// Kuhn poker.

struct KuhnSpec {
  int num_players = 2;
};

// History grammar: pre-bet entries are 'p' (pass) or 'b' (bet); once a 'b'
// appears, later entries are responses 'p' (fold) or 'b' (call) from the
// other players in wrap-around seat order. The next player to act is always
// history.size() mod n, and the hand ends after everyone passed or after the
// last response to the bet.
int KuhnBettor(const std::string& history) {
  const size_t pos = history.find('b');
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

bool KuhnIsTerminal(const KuhnSpec& spec, const std::string& history) {
  const int bettor = KuhnBettor(history);
  if (bettor < 0) return static_cast<int>(history.size()) == spec.num_players;
  return static_cast<int>(history.size()) == bettor + spec.num_players;
}

std::vector<double> KuhnReturns(const KuhnSpec& spec,
                                const std::vector<int>& cards,
                                const std::string& history) {
  const int n = spec.num_players;
  std::vector<double> returns(n, 0.0);
  const int bettor = KuhnBettor(history);
  if (bettor < 0) {
    // Everyone passed: showdown among all players for the antes.
    const int winner = static_cast<int>(
        std::max_element(cards.begin(), cards.end()) - cards.begin());
    for (int p = 0; p < n; ++p) returns[p] = p == winner ? n - 1.0 : -1.0;
    return returns;
  }
  // Contributions: antes plus one chip for the bettor and each caller.
  std::vector<char> in_showdown(n, 0);
  in_showdown[bettor] = 1;
  int callers = 0;
  for (int offset = 1; offset < n; ++offset) {
    const int responder = (bettor + offset) % n;
    if (history[bettor + offset] == 'b') {
      in_showdown[responder] = 1;
      ++callers;
    }
  }
  int winner = -1;
  for (int p = 0; p < n; ++p) {
    if (in_showdown[p] && (winner < 0 || cards[p] > cards[winner])) winner = p;
  }
  const double pot = n + 1.0 + callers;
  for (int p = 0; p < n; ++p) {
    if (p == winner) {
      returns[p] = pot - 2.0;
    } else {
      returns[p] = in_showdown[p] ? -2.0 : -1.0;
    }
  }
  return returns;
}

int BuildKuhnSubtree(TreeBuilder* tree, const KuhnSpec& spec,
                     const std::vector<int>& cards,
                     const std::string& history) {
  const int index = tree->Reserve();
  if (KuhnIsTerminal(spec, history)) {
    GameNode node;
    node.kind = GameNode::Kind::kTerminal;
    node.returns = KuhnReturns(spec, cards, history);
    tree->nodes[index] = std::move(node);
    return index;
  }
  const int player = static_cast<int>(history.size()) % spec.num_players;
  GameNode node;
  node.kind = GameNode::Kind::kDecision;
  node.player = player;
  node.info_state = std::to_string(cards[player]) + ":" + history;
  node.children = {BuildKuhnSubtree(tree, spec, cards, history + "p"),
                   BuildKuhnSubtree(tree, spec, cards, history + "b")};
  tree->nodes[index] = std::move(node);
  return index;
}

void EnumerateDeals(int num_players, int num_cards, std::vector<int>* current,
                    std::vector<char>* used,
                    std::vector<std::vector<int>>* deals) {
  if (static_cast<int>(current->size()) == num_players) {
    deals->push_back(*current);
    return;
  }
  for (int card = 1; card <= num_cards; ++card) {
    if ((*used)[card]) continue;
    (*used)[card] = 1;
    current->push_back(card);
    EnumerateDeals(num_players, num_cards, current, used, deals);
    current->pop_back();
    (*used)[card] = 0;
  }
}

}  // namespace

EfgGame KuhnPokerGame(int num_players) {
  JEQ_CHECK_GE(num_players, 2);
  JEQ_CHECK_LE(num_players, 3);
  const KuhnSpec spec{num_players};
  const int num_cards = num_players + 1;

  std::vector<std::vector<int>> deals;
  std::vector<int> current;
  std::vector<char> used(num_cards + 1, 0);
  EnumerateDeals(num_players, num_cards, &current, &used, &deals);

  TreeBuilder tree;
  const int root = tree.Reserve();
  GameNode chance;
  chance.kind = GameNode::Kind::kChance;
  const double prob = 1.0 / static_cast<double>(deals.size());
  for (const std::vector<int>& deal : deals) {
    chance.children.push_back(BuildKuhnSubtree(&tree, spec, deal, ""));
    chance.chance_probs.push_back(prob);
  }
  tree.nodes[root] = std::move(chance);
  return EfgGame("kuhn_poker_" + std::to_string(num_players) + "p",
                 num_players, std::move(tree.nodes));
}

// ---------------------------------------------------------------------------
// Trade & communicate.

namespace {

int BuildTradeTerminal(TreeBuilder* tree, int num_items, int item0, int item1,
                       int trade0, int trade1) {
  const int index = tree->Reserve();
  const int give0 = trade0 / num_items;
  const int get0 = trade0 % num_items;
  const int give1 = trade1 / num_items;
  const int get1 = trade1 % num_items;
  const bool compatible =
      give0 == item0 && give1 == item1 && get0 == give1 && get1 == give0;
  GameNode node;
  node.kind = GameNode::Kind::kTerminal;
  node.returns = compatible ? std::vector<double>{1.0, 1.0}
                            : std::vector<double>{0.0, 0.0};
  tree->nodes[index] = std::move(node);
  return index;
}

}  // namespace

EfgGame TradeCommGame(int num_items) {
  JEQ_CHECK_GE(num_items, 2);
  const int trades = num_items * num_items;
  TreeBuilder tree;
  const int root = tree.Reserve();
  GameNode chance;
  chance.kind = GameNode::Kind::kChance;
  const double deal_prob = 1.0 / static_cast<double>(trades);

  for (int item0 = 0; item0 < num_items; ++item0) {
    for (int item1 = 0; item1 < num_items; ++item1) {
      const int utter0_index = tree.Reserve();
      GameNode utter0;
      utter0.kind = GameNode::Kind::kDecision;
      utter0.player = 0;
      utter0.info_state = "0:item" + std::to_string(item0);
      for (int u0 = 0; u0 < num_items; ++u0) {
        const int utter1_index = tree.Reserve();
        GameNode utter1;
        utter1.kind = GameNode::Kind::kDecision;
        utter1.player = 1;
        utter1.info_state =
            "1:item" + std::to_string(item1) + ":heard" + std::to_string(u0);
        for (int u1 = 0; u1 < num_items; ++u1) {
          const int trade0_index = tree.Reserve();
          GameNode trade0;
          trade0.kind = GameNode::Kind::kDecision;
          trade0.player = 0;
          trade0.info_state = "0:item" + std::to_string(item0) + ":said" +
                              std::to_string(u0) + ":heard" +
                              std::to_string(u1);
          for (int t0 = 0; t0 < trades; ++t0) {
            const int trade1_index = tree.Reserve();
            GameNode trade1;
            trade1.kind = GameNode::Kind::kDecision;
            trade1.player = 1;
            // Proposals stay private: player 1's key is independent of t0.
            trade1.info_state = "1:item" + std::to_string(item1) + ":heard" +
                                std::to_string(u0) + ":said" +
                                std::to_string(u1);
            for (int t1 = 0; t1 < trades; ++t1) {
              trade1.children.push_back(
                  BuildTradeTerminal(&tree, num_items, item0, item1, t0, t1));
            }
            tree.nodes[trade1_index] = std::move(trade1);
            trade0.children.push_back(trade1_index);
          }
          tree.nodes[trade0_index] = std::move(trade0);
          utter1.children.push_back(trade0_index);
        }
        tree.nodes[utter1_index] = std::move(utter1);
        utter0.children.push_back(utter1_index);
      }
      tree.nodes[utter0_index] = std::move(utter0);
      chance.children.push_back(utter0_index);
      chance.chance_probs.push_back(deal_prob);
    }
  }
  tree.nodes[root] = std::move(chance);
  return EfgGame("trade_comm_" + std::to_string(num_items), 2,
                 std::move(tree.nodes));
}

// ---------------------------------------------------------------------------
// Sheriff.

namespace {

int BuildSheriffRound(TreeBuilder* tree, const SheriffConfig& cfg, int items,
                      int round, const std::string& history) {
  const int index = tree->Reserve();
  GameNode bribe_node;
  bribe_node.kind = GameNode::Kind::kDecision;
  bribe_node.player = 0;
  bribe_node.info_state =
      "S:n" + std::to_string(items) + ":" + history;
  for (int bribe = 0; bribe <= cfg.max_bribe; ++bribe) {
    const int response_index = tree->Reserve();
    GameNode response_node;
    response_node.kind = GameNode::Kind::kDecision;
    response_node.player = 1;
    // The sheriff sees proposals and its own past signals, not the cargo.
    response_node.info_state = "H:" + history + "b" + std::to_string(bribe);
    for (int accept = 0; accept <= 1; ++accept) {
      if (round + 1 < cfg.num_rounds) {
        const std::string next_history =
            history + "b" + std::to_string(bribe) + (accept ? "a" : "r");
        response_node.children.push_back(
            BuildSheriffRound(tree, cfg, items, round + 1, next_history));
      } else {
        const int terminal = tree->Reserve();
        GameNode leaf;
        leaf.kind = GameNode::Kind::kTerminal;
        if (accept) {
          leaf.returns = {items * cfg.item_value - bribe,
                          static_cast<double>(bribe)};
        } else if (items > 0) {
          leaf.returns = {-cfg.fine * items, cfg.fine * items};
        } else {
          leaf.returns = {cfg.penalty, -cfg.penalty};
        }
        tree->nodes[terminal] = std::move(leaf);
        response_node.children.push_back(terminal);
      }
    }
    tree->nodes[response_index] = std::move(response_node);
    bribe_node.children.push_back(response_index);
  }
  tree->nodes[index] = std::move(bribe_node);
  return index;
}

}  // namespace

EfgGame SheriffGame(const SheriffConfig& config) {
  JEQ_CHECK_GE(config.num_rounds, 1);
  JEQ_CHECK_GE(config.max_bribe, 0);
  JEQ_CHECK_GE(config.max_items, 1);
  TreeBuilder tree;
  const int root = tree.Reserve();
  GameNode load;
  load.kind = GameNode::Kind::kDecision;
  load.player = 0;
  load.info_state = "S:load";
  for (int items = 0; items <= config.max_items; ++items) {
    load.children.push_back(BuildSheriffRound(&tree, config, items, 0, ""));
  }
  tree.nodes[root] = std::move(load);
  return EfgGame("sheriff", 2, std::move(tree.nodes));
}

// ---------------------------------------------------------------------------
// Matrix game wrapper.

namespace {

int BuildMatrixSubtree(TreeBuilder* tree, const NormalFormGame& game,
                       std::vector<int>* actions) {
  const int index = tree->Reserve();
  const int player = static_cast<int>(actions->size());
  if (player == game.num_players()) {
    const int64_t flat = game.FlatIndex(*actions);
    GameNode leaf;
    leaf.kind = GameNode::Kind::kTerminal;
    leaf.returns.resize(game.num_players());
    for (int p = 0; p < game.num_players(); ++p) {
      leaf.returns[p] = game.payoffs[p][flat];
    }
    tree->nodes[index] = std::move(leaf);
    return index;
  }
  GameNode node;
  node.kind = GameNode::Kind::kDecision;
  node.player = player;
  node.info_state = "p" + std::to_string(player);
  for (int a = 0; a < game.actions_per_player[player]; ++a) {
    actions->push_back(a);
    node.children.push_back(BuildMatrixSubtree(tree, game, actions));
    actions->pop_back();
  }
  tree->nodes[index] = std::move(node);
  return index;
}

}  // namespace

EfgGame MatrixGameAsEfg(const NormalFormGame& game) {
  game.Validate();
  TreeBuilder tree;
  std::vector<int> actions;
  BuildMatrixSubtree(&tree, game, &actions);
  return EfgGame("matrix_game", game.num_players(), std::move(tree.nodes));
}

}  // namespace jointeq
