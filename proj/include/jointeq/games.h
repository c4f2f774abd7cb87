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

#ifndef JOINTEQ_GAMES_H_
#define JOINTEQ_GAMES_H_

#include "jointeq/efg.h"
#include "jointeq/normal_form.h"

namespace jointeq {

// n-player Kuhn poker with n+1 cards (values 1..n+1). Every player antes one
// chip and receives one card. Players act in seat order choosing pass or bet
// (action 0 = pass, 1 = bet); once someone bets, the remaining players — in
// wrap-around order — choose fold (0) or call (1). If nobody bets, the
// highest card wins the antes; otherwise the highest card among the bettor
// and callers takes the pot. Info-state keys look like "2:pb" (own card,
// public action history with 'p' = pass/fold and 'b' = bet/call).
EfgGame KuhnPokerGame(int num_players);

// Two-player item trading with a communication round. Chance deals each
// player one of `num_items` item types (uniform over all pairs). Player 0
// makes one of `num_items` public utterances, then player 1 does. Each then
// privately picks one of num_items^2 give/get trade proposals (action
// give*num_items + get); the proposals are not revealed to the other player.
// A compatible trade — each side gives the item it holds and asks for the
// item the other side gives — pays both players 1, anything else pays 0.
EfgGame TradeCommGame(int num_items = 3);

// Two-player smuggling/bribery bargaining game. The smuggler (player 0)
// secretly loads 0..max_items contraband items worth item_value each, then
// the two sides alternate through num_rounds rounds: the smuggler proposes a
// bribe in 0..max_bribe and the sheriff (player 1) signals accept (1) or
// reject (0). Only the final round is binding: on accept the smuggler keeps
// the cargo and pays the last bribe; on reject the sheriff inspects —
// contraband is fined per item, and an empty hold obliges the sheriff to pay
// the smuggler a penalty for the unfounded search.
struct SheriffConfig {
  int num_rounds = 2;
  int max_bribe = 3;
  int max_items = 3;
  double item_value = 1.0;
  double fine = 2.0;
  double penalty = 3.0;
};

EfgGame SheriffGame(const SheriffConfig& config = SheriffConfig());

// One-shot matrix game as a tree: players move in index order without
// observing anyone else, so each player has a single info state ("p0",
// "p1", ...) and the terminals carry the payoff vectors.
EfgGame MatrixGameAsEfg(const NormalFormGame& game);

}  // namespace jointeq

#endif  // JOINTEQ_GAMES_H_
