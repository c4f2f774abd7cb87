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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "jointeq/normal_form.h"
#include "jointeq/rng.h"
#include "jointeq/sparse.h"

namespace jointeq {
namespace {

std::vector<double> DenseRowOf(const ConstraintSystem& cs, int64_t row) {
  return DenseRow(cs.rows, row);
}

NormalFormGame RandomGame(const std::vector<int>& actions, uint64_t seed) {
  NormalFormGame game;
  game.actions_per_player = actions;
  SeededSampler sampler(seed);
  game.payoffs.assign(actions.size(),
                      std::vector<double>(game.num_joint_actions()));
  for (auto& tensor : game.payoffs) {
    for (double& v : tensor) v = sampler.Gaussian();
  }
  return game;
}

TEST_CASE("flat index round trip and strides") {
  NormalFormGame game = RandomGame({2, 3, 4}, 7);
  CHECK(game.num_joint_actions() == 24);
  const auto strides = game.Strides();
  CHECK(strides == std::vector<int64_t>{12, 4, 1});
  for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
    const std::vector<int> a = game.UnflattenIndex(j);
    CHECK(game.FlatIndex(a) == j);
    int64_t manual = 0;
    for (int p = 0; p < game.num_players(); ++p) manual += a[p] * strides[p];
    CHECK(manual == j);
  }
  CHECK_THROWS_AS(game.FlatIndex({0, 0}), std::runtime_error);
  CHECK_THROWS_AS(game.FlatIndex({0, 3, 0}), std::runtime_error);
}

TEST_CASE("validate rejects malformed games") {
  NormalFormGame game = TrafficLightsGame();
  CHECK_NOTHROW(game.Validate());
  game.payoffs[0].pop_back();
  CHECK_THROWS_AS(game.Validate(), std::runtime_error);
  NormalFormGame empty;
  CHECK_THROWS_AS(empty.Validate(), std::runtime_error);
}

TEST_CASE("traffic lights CE constraint rows") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  CHECK(cs.kind == DeviationKind::kCe);
  REQUIRE(cs.num_rows() == 4);
  CHECK(cs.num_joint_actions() == 4);
  for (double eps : cs.epsilon) CHECK(eps == 0.0);

  // Rows come out grouped by player, then by recommended action, then by
  // deviation. Joint actions are ordered GG, GW, WG, WW.
  const std::vector<std::vector<double>> want = {
      {10.0, -1.0, 0.0, 0.0},   // player 0, recommended G, deviate W
      {0.0, 0.0, -10.0, 1.0},   // player 0, recommended W, deviate G
      {10.0, 0.0, -1.0, 0.0},   // player 1, recommended G, deviate W
      {0.0, -10.0, 0.0, 1.0},   // player 1, recommended W, deviate G
  };
  const std::vector<DeviationTag> tags = {
      {0, 0, 1}, {0, 1, 0}, {1, 0, 1}, {1, 1, 0}};
  for (int64_t i = 0; i < 4; ++i) {
    CHECK(DenseRowOf(cs, i) == want[i]);
    CHECK(cs.row_index[i].player == tags[i].player);
    CHECK(cs.row_index[i].recommended == tags[i].recommended);
    CHECK(cs.row_index[i].deviation == tags[i].deviation);
  }
}

TEST_CASE("traffic lights CCE constraint rows") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCceConstraints(game);
  CHECK(cs.kind == DeviationKind::kCce);
  REQUIRE(cs.num_rows() == 4);

  // Rows grouped by player, then by deviation action.
  const std::vector<std::vector<double>> want = {
      {0.0, 0.0, -10.0, 1.0},   // player 0, always G
      {10.0, -1.0, 0.0, 0.0},   // player 0, always W
      {0.0, -10.0, 0.0, 1.0},   // player 1, always G
      {10.0, 0.0, -1.0, 0.0},   // player 1, always W
  };
  const std::vector<DeviationTag> tags = {
      {0, -1, 0}, {0, -1, 1}, {1, -1, 0}, {1, -1, 1}};
  for (int64_t i = 0; i < 4; ++i) {
    CHECK(DenseRowOf(cs, i) == want[i]);
    CHECK(cs.row_index[i].player == tags[i].player);
    CHECK(cs.row_index[i].recommended == -1);
    CHECK(cs.row_index[i].deviation == tags[i].deviation);
  }
}

TEST_CASE("CE rows have one entry per opponent profile") {
  // With continuous random payoffs no gain ties occur, so the structural
  // pattern is exact: the row for (p, a -> a') touches only joint actions
  // with a_p = a, one entry per opponent profile.
  const NormalFormGame game = RandomGame({2, 3, 4}, 11);
  const ConstraintSystem cs = BuildCeConstraints(game);
  int64_t expected_rows = 0;
  for (int a : game.actions_per_player) expected_rows += int64_t{a} * (a - 1);
  REQUIRE(cs.num_rows() == expected_rows);  // 2 + 6 + 12 = 20.
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    const DeviationTag tag = cs.row_index[i];
    const int64_t per_row =
        game.num_joint_actions() / game.actions_per_player[tag.player];
    CHECK(cs.rows.row_start[i + 1] - cs.rows.row_start[i] == per_row);
    for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k) {
      const std::vector<int> joint = game.UnflattenIndex(cs.rows.col[k]);
      CHECK(joint[tag.player] == tag.recommended);
    }
  }
}

TEST_CASE("each CCE row is the sum of its CE rows") {
  // The unconditional CCE constraint for (p, a') aggregates the CE
  // constraints (p, a -> a') over all recommendations a != a'. The payoff
  // differences are computed identically and land on disjoint columns, so
  // equality is exact, not approximate.
  const NormalFormGame game = RandomGame({3, 2, 3}, 23);
  const ConstraintSystem ce = BuildCeConstraints(game);
  const ConstraintSystem cce = BuildCceConstraints(game);
  int64_t expected_cce_rows = 0;
  for (int a : game.actions_per_player) expected_cce_rows += a;
  REQUIRE(cce.num_rows() == expected_cce_rows);

  for (int64_t i = 0; i < cce.num_rows(); ++i) {
    const DeviationTag tag = cce.row_index[i];
    std::vector<double> sum(game.num_joint_actions(), 0.0);
    for (int64_t r = 0; r < ce.num_rows(); ++r) {
      if (ce.row_index[r].player == tag.player &&
          ce.row_index[r].deviation == tag.deviation) {
        const std::vector<double> row = DenseRowOf(ce, r);
        for (int64_t j = 0; j < game.num_joint_actions(); ++j) sum[j] += row[j];
      }
    }
    CHECK(DenseRowOf(cce, i) == sum);
  }
}

TEST_CASE("constraint violation at the uniform distribution") {
  const NormalFormGame game = TrafficLightsGame();
  const std::vector<double> uniform(4, 0.25);
  const ConstraintSystem cce = BuildCceConstraints(game);
  CHECK(ConstraintViolation(cce, uniform) == doctest::Approx(2.25).epsilon(1e-12));
  const ConstraintSystem ce = BuildCeConstraints(game);
  CHECK(ConstraintViolation(ce, uniform) == doctest::Approx(2.25).epsilon(1e-12));

  // A single-action game produces no deviation rows; violation is -inf.
  NormalFormGame trivial;
  trivial.actions_per_player = {1, 1};
  trivial.payoffs = {{5.0}, {-2.0}};
  const ConstraintSystem none = BuildCeConstraints(trivial);
  CHECK(none.num_rows() == 0);
  CHECK(ConstraintViolation(none, {1.0}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("row normalization drops zero rows and rescales epsilon") {
  // Player 0's two actions have identical payoff slices, so their CE rows
  // are identically zero and must be dropped.
  NormalFormGame game;
  game.actions_per_player = {2, 2};
  game.payoffs = {{1.0, 2.0, 1.0, 2.0}, {3.0, 4.0, 3.0, 4.0}};
  ConstraintSystem cs = BuildCeConstraints(game, 0.5);
  REQUIRE(cs.num_rows() == 4);
  const NormalizedSystem normalized = NormalizeRows(cs);
  CHECK(normalized.dropped_rows == 2);
  REQUIRE(normalized.kept_rows.size() == 2);
  CHECK(normalized.kept_rows == std::vector<int64_t>{2, 3});
  for (size_t i = 0; i < normalized.kept_rows.size(); ++i) {
    const std::vector<double> row = DenseRow(normalized.system.rows, i);
    double sq = 0.0;
    for (double v : row) sq += v * v;
    CHECK(std::sqrt(sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normalized.system.epsilon[i] ==
          doctest::Approx(0.5 / normalized.row_scale[i]).epsilon(1e-12));
    CHECK(normalized.row_scale[i] > 0.0);
  }
}

TEST_CASE("gini impurity") {
  CHECK(GiniImpurity({1.0, 0.0, 0.0}) == 0.0);
  CHECK(GiniImpurity({0.25, 0.25, 0.25, 0.25}) == 0.75);
  JointDistribution dist{{0.5, 0.5, 0.0, 0.0}};
  CHECK(dist.Gini() == 0.5);
}

TEST_CASE("clamp and normalize") {
  const JointDistribution d =
      ClampAndNormalize({0.2, -1e-9, 0.3, 0.5}, 1e-8);
  CHECK(d.probs[1] == 0.0);
  double sum = 0.0;
  for (double v : d.probs) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.probs[3] == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(ClampAndNormalize({0.5, -1.0}, 1e-8), std::runtime_error);
  CHECK_THROWS_AS(ClampAndNormalize({0.0, 0.0}, 1e-8), std::runtime_error);
}

TEST_CASE("marginals of a joint distribution") {
  const NormalFormGame game = TrafficLightsGame();
  JointDistribution dist{{7.0 / 214, 70.0 / 214, 70.0 / 214, 67.0 / 214}};
  const std::vector<double> m0 = dist.Marginal(game, 0);
  const std::vector<double> m1 = dist.Marginal(game, 1);
  CHECK(m0[0] == doctest::Approx(77.0 / 214).epsilon(1e-12));
  CHECK(m0[1] == doctest::Approx(137.0 / 214).epsilon(1e-12));
  CHECK(m1[0] == doctest::Approx(77.0 / 214).epsilon(1e-12));
  CHECK(m1[1] == doctest::Approx(137.0 / 214).epsilon(1e-12));
}

TEST_CASE("repeated action elimination and expansion") {
  // Player 1's actions 0 and 2 are exact copies across both payoff tensors.
  NormalFormGame game;
  game.actions_per_player = {2, 3};
  game.payoffs = {{1.0, 2.0, 1.0, 3.0, 4.0, 3.0},
                  {5.0, 6.0, 5.0, 7.0, 8.0, 7.0}};
  const ReducedGame reduced = EliminateRepeatedActions(game);
  CHECK(reduced.game.actions_per_player == std::vector<int>{2, 2});
  CHECK(reduced.map.original_to_reduced[0] == std::vector<int>{0, 1});
  CHECK(reduced.map.original_to_reduced[1] == std::vector<int>{0, 1, 0});
  CHECK(reduced.map.repeat_counts[0] == std::vector<int>{1, 1});
  CHECK(reduced.map.repeat_counts[1] == std::vector<int>{2, 1});
  CHECK(reduced.game.payoffs[0] == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(reduced.game.payoffs[1] == std::vector<double>{5.0, 6.0, 7.0, 8.0});

  // Reduced probabilities are per-copy masses: with copy counts (2, 1, 2, 1)
  // the weighted sum below is exactly one, so expansion just replicates.
  const std::vector<double> reduced_probs = {0.1, 0.2, 0.15, 0.3};
  const JointDistribution expanded =
      ExpandDistribution(game, reduced.game, reduced.map, reduced_probs);
  const std::vector<double> want = {0.1, 0.2, 0.1, 0.15, 0.3, 0.15};
  REQUIRE(expanded.probs.size() == want.size());
  for (size_t j = 0; j < want.size(); ++j) {
    CHECK(expanded.probs[j] == doctest::Approx(want[j]).epsilon(1e-12));
  }

  // A game with no repeats reduces to itself.
  const NormalFormGame traffic = TrafficLightsGame();
  const ReducedGame same = EliminateRepeatedActions(traffic);
  CHECK(same.game.actions_per_player == traffic.actions_per_player);
  CHECK(same.game.payoffs == traffic.payoffs);
}

TEST_CASE("iterated strict dominance on the prisoners dilemma") {
  const NormalFormGame game = PrisonersDilemmaGame();
  const DominanceReduction reduced = EliminateDominatedActions(game);
  CHECK(reduced.kept_actions[0] == std::vector<int>{1});
  CHECK(reduced.kept_actions[1] == std::vector<int>{1});
  CHECK(reduced.game.num_joint_actions() == 1);
  CHECK(reduced.game.payoffs[0] == std::vector<double>{1.0});
  CHECK(reduced.game.payoffs[1] == std::vector<double>{1.0});

  // Matching pennies has no dominated actions.
  const DominanceReduction mp = EliminateDominatedActions(MatchingPenniesGame());
  CHECK(mp.game.num_joint_actions() == 4);
}

TEST_CASE("welfare and expected values") {
  const NormalFormGame game = TrafficLightsGame();
  CHECK(WelfareVector(game) == std::vector<double>{-20.0, 1.0, 1.0, 0.0});
  const JointDistribution uniform{{0.25, 0.25, 0.25, 0.25}};
  const std::vector<double> values = ExpectedValues(game, uniform);
  CHECK(values[0] == doctest::Approx(-2.25).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(-2.25).epsilon(1e-12));
}

TEST_CASE("game file round trip preserves exact payoffs") {
  NormalFormGame game = RandomGame({2, 3}, 99);
  game.payoffs[0][0] = 1.0 / 3.0;  // needs all 17 digits
  const std::string path = "/tmp/jointeq_normal_form_test_game.txt";
  WriteGameFile(game, path);
  const NormalFormGame loaded = LoadGameFile(path);
  CHECK(loaded.actions_per_player == game.actions_per_player);
  CHECK(loaded.payoffs == game.payoffs);
  std::remove(path.c_str());
}

TEST_CASE("game text parsing rejects malformed input") {
  {
    std::istringstream in("players: 2");
    CHECK_THROWS_AS(ParseGameText(in), std::runtime_error);
  }
  {
    std::istringstream in(
        "num_players: 2\nactions_per_player: 2 2\npayoffs: 1 2 3");
    CHECK_THROWS_AS(ParseGameText(in), std::runtime_error);
  }
  {
    std::istringstream in(
        "num_players: 2\nactions_per_player: 2 2\n"
        "payoffs: 1 2 3 4 5 6 7 8 9");
    CHECK_THROWS_AS(ParseGameText(in), std::runtime_error);
  }
  {
    std::istringstream in(
        "num_players: 1\nactions_per_player: 3\npayoffs: 1 2 3");
    CHECK_NOTHROW(ParseGameText(in));
  }
}

}  // namespace
}  // namespace jointeq
