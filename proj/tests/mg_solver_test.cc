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
#include <sstream>
#include <vector>

#include "jointeq/errors.h"
#include "jointeq/mg_solver.h"
#include "jointeq/normal_form.h"
#include "jointeq/rng.h"

namespace jointeq {
namespace {

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

void CheckNear(const std::vector<double>& got, const std::vector<double>& want,
               double tol) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(got[i] - want[i]) <= tol);
  }
}

// The unique maximum-Gini correlated equilibrium of the traffic lights game
// at epsilon = 0, solved by hand from the two active go->wait constraints.
const std::vector<double> kTrafficMg = {7.0 / 214, 70.0 / 214, 70.0 / 214,
                                        67.0 / 214};

TEST_CASE("traffic lights maximum-Gini CE at epsilon zero") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  const MgSolution s = SolveMaxGini(cs, config);
  CheckNear(s.sigma.probs, kTrafficMg, 1e-7);
  CHECK(s.kkt.Max() <= config.tol_kkt);
  CHECK(s.gini == doctest::Approx(GiniImpurity(kTrafficMg)).epsilon(1e-6));

  // The two go->wait rows are active with multiplier 3/214; the wait->go
  // rows are slack. The probability-simplex multiplier is -67/214.
  REQUIRE(s.dual.alpha.size() == 4);
  CHECK(std::abs(s.dual.alpha[0] - 3.0 / 214) <= 1e-5);
  CHECK(std::abs(s.dual.alpha[1]) <= 1e-6);
  CHECK(std::abs(s.dual.alpha[2] - 3.0 / 214) <= 1e-5);
  CHECK(std::abs(s.dual.alpha[3]) <= 1e-6);
  for (double b : s.dual.beta) CHECK(std::abs(b) <= 1e-6);
  CHECK(std::abs(s.dual.lambda - (-67.0 / 214)) <= 1e-5);
  CHECK(s.epsilon_scalar == 0.0);
}

TEST_CASE("traffic lights maximum-Gini CCE matches the CE solution") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCceConstraints(game);
  SolverConfig config;
  const MgSolution s = SolveMaxGini(cs, config);
  CheckNear(s.sigma.probs, kTrafficMg, 1e-7);
  CHECK(s.kkt.Max() <= config.tol_kkt);
}

TEST_CASE("active-set engine reproduces the dual engine") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.engine = SolveEngine::kPrimalActiveSet;
  const MgSolution s = SolveMaxGini(cs, config);
  CheckNear(s.sigma.probs, kTrafficMg, 1e-9);
  CHECK(s.kkt.Max() <= 1e-8);
  CHECK(std::abs(s.dual.alpha[0] - 3.0 / 214) <= 1e-9);
  CHECK(std::abs(s.dual.lambda - (-67.0 / 214)) <= 1e-9);
}

TEST_CASE("cross-engine agreement on random games") {
  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {2, 2, 2}};
  for (size_t g = 0; g < shapes.size(); ++g) {
    const NormalFormGame game = RandomGame(shapes[g], 103);
    for (DeviationKind kind : {DeviationKind::kCe, DeviationKind::kCce}) {
      const ConstraintSystem cs = kind == DeviationKind::kCe
                                      ? BuildCeConstraints(game)
                                      : BuildCceConstraints(game);
      for (double eps : {0.0, 0.3}) {
        SolverConfig dual_cfg;
        dual_cfg.epsilon = eps;
        dual_cfg.tol_kkt = 1e-8;
        const MgSolution a = SolveMaxGini(cs, dual_cfg);
        SolverConfig qp_cfg = dual_cfg;
        qp_cfg.engine = SolveEngine::kPrimalActiveSet;
        const MgSolution b = SolveMaxGini(cs, qp_cfg);
        CheckNear(a.sigma.probs, b.sigma.probs, 1e-6);
        CHECK(a.kkt.Max() <= dual_cfg.tol_kkt);
        CHECK(b.kkt.Max() <= 1e-6);
        CHECK(ConstraintViolation(cs, a.sigma.probs) <= eps + 1e-7);
      }
    }
  }
}

TEST_CASE("singleton polytopes: exact QP, honest dual iteration limit") {
  // This game's CE polytope at epsilon zero collapses to a single point
  // mass whose duals are in the hundreds. The active-set engine solves it
  // exactly; the first-order dual engine cannot grow its multipliers there
  // in any reasonable budget and must say so rather than return junk.
  const NormalFormGame game = RandomGame({2, 2, 2}, 102);
  const ConstraintSystem cs = BuildCeConstraints(game);

  SolverConfig qp_cfg;
  qp_cfg.engine = SolveEngine::kPrimalActiveSet;
  const MgSolution exact = SolveMaxGini(cs, qp_cfg);
  CHECK(exact.gini <= 1e-9);
  CHECK(exact.kkt.Max() <= 1e-8);

  SolverConfig dual_cfg;
  dual_cfg.max_iters = 60000;
  try {
    SolveMaxGini(cs, dual_cfg);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::kIterationLimit);
  }
}

TEST_CASE("max-Ab epsilon makes the uniform distribution exactly optimal") {
  const NormalFormGame traffic = TrafficLightsGame();
  CHECK(MaxAbEpsilon(BuildCeConstraints(traffic)) == 2.25);
  CHECK(MaxAbEpsilon(BuildCceConstraints(traffic)) == 2.25);

  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {2, 2, 2}};
  for (size_t g = 0; g < shapes.size(); ++g) {
    const NormalFormGame game = RandomGame(shapes[g], 300 + g);
    for (DeviationKind kind : {DeviationKind::kCe, DeviationKind::kCce}) {
      const ConstraintSystem cs = kind == DeviationKind::kCe
                                      ? BuildCeConstraints(game)
                                      : BuildCceConstraints(game);
      SolverConfig config;
      config.epsilon_mode = EpsilonMode::kMaxAb;
      const MgSolution s = SolveMaxGini(cs, config);
      // Bitwise equality: the dual iteration never moves off its start.
      const double u = 1.0 / static_cast<double>(game.num_joint_actions());
      for (double p : s.sigma.probs) CHECK(p == u);
      CHECK(s.epsilon_scalar == MaxAbEpsilon(cs));
    }
  }
}

TEST_CASE("half-max-Ab epsilon lands between zero and max-Ab") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCceConstraints(game);
  SolverConfig config;
  config.epsilon_mode = EpsilonMode::kHalfMaxAb;
  const MgSolution s = SolveMaxGini(cs, config);
  CHECK(s.epsilon_scalar == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(ConstraintViolation(cs, s.sigma.probs) <= 1.125 + 1e-6);
  CHECK(s.gini >= GiniImpurity(kTrafficMg) - 1e-7);
  CHECK(s.gini <= 0.75 + 1e-12);
}

TEST_CASE("minimum epsilon on traffic lights is -1/2") {
  const NormalFormGame game = TrafficLightsGame();
  for (DeviationKind kind : {DeviationKind::kCe, DeviationKind::kCce}) {
    const ConstraintSystem cs = kind == DeviationKind::kCe
                                    ? BuildCeConstraints(game)
                                    : BuildCceConstraints(game);
    SolverConfig config;
    config.epsilon_mode = EpsilonMode::kMinEpsilon;
    const MgSolution s = SolveMaxGini(cs, config);
    CHECK(s.epsilon_scalar == doctest::Approx(-0.5).epsilon(1e-9));
    // The feasible set at the minimum collapses to a single point.
    CheckNear(s.sigma.probs, {0.0, 0.5, 0.5, 0.0}, 1e-4);
  }
}

TEST_CASE("minimum epsilon never exceeds zero") {
  // A correlated equilibrium always exists, so epsilon = 0 is feasible.
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const NormalFormGame game = RandomGame({2, 3}, 400 + seed);
    const ConstraintSystem cs = BuildCeConstraints(game);
    SolverConfig config;
    config.epsilon_mode = EpsilonMode::kMinEpsilon;
    // The QP runs with tol_feas of slack above the exact LP optimum and
    // stops at tol_kkt residual; tighten the residual so the slack dominates.
    config.tol_kkt = 1e-8;
    const MgSolution s = SolveMaxGini(cs, config);
    CHECK(s.epsilon_scalar <= 1e-10);
    CHECK(ConstraintViolation(cs, s.sigma.probs) <= s.epsilon_scalar + 1e-7);
  }
}

TEST_CASE("full-support epsilon boundary on traffic lights") {
  // Below eps = -21/62 the GG probability of the maximum-Gini CE hits zero;
  // the bisection must land just above that boundary.
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.epsilon_mode = EpsilonMode::kFullSupportMin;
  const MgSolution s = SolveMaxGini(cs, config);
  CHECK(std::abs(s.epsilon_scalar - (-21.0 / 62)) <= 1e-5);
  CheckNear(s.sigma.probs, {0.0, 21.0 / 62, 21.0 / 62, 20.0 / 62}, 1e-3);
  for (double p : s.raw_sigma) CHECK(p > 0.0);
}

TEST_CASE("matching pennies degenerates to the uniform point") {
  const NormalFormGame game = MatchingPenniesGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  CHECK(MaxAbEpsilon(cs) == 0.0);

  SolverConfig config;
  const MgSolution at_zero = SolveMaxGini(cs, config);
  for (double p : at_zero.sigma.probs) CHECK(p == 0.25);

  config.epsilon_mode = EpsilonMode::kMinEpsilon;
  const MgSolution at_min = SolveMaxGini(cs, config);
  CHECK(std::abs(at_min.epsilon_scalar) <= 1e-9);

  config.epsilon_mode = EpsilonMode::kFullSupportMin;
  const MgSolution at_full = SolveMaxGini(cs, config);
  CHECK(std::abs(at_full.epsilon_scalar) <= 1e-6);
  CheckNear(at_full.sigma.probs, {0.25, 0.25, 0.25, 0.25}, 1e-6);
}

TEST_CASE("prisoners dilemma concentrates on mutual defection") {
  const NormalFormGame game = PrisonersDilemmaGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  // The point-mass optimum sits on a degenerate vertex; a tighter residual
  // keeps the recovered sigma within the asserted tolerance.
  config.tol_kkt = 1e-8;
  const MgSolution s = SolveMaxGini(cs, config);
  CheckNear(s.sigma.probs, {0.0, 0.0, 0.0, 1.0}, 1e-6);
  CHECK(s.gini <= 1e-6);
}

TEST_CASE("full-support mode on an interior optimum") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.support_mode = SupportMode::kFullSupport;
  const MgSolution s = SolveMaxGini(cs, config);
  CHECK(s.used_full_support);
  CHECK(!s.fell_back_to_general);
  CHECK(s.dual.beta.empty());
  CheckNear(s.sigma.probs, kTrafficMg, 1e-6);
}

TEST_CASE("full-support mode falls back when the optimum has zeros") {
  const NormalFormGame game = PrisonersDilemmaGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.support_mode = SupportMode::kFullSupport;
  config.tol_kkt = 1e-8;

  SUBCASE("automatic fallback") {
    const MgSolution s = SolveMaxGini(cs, config);
    CHECK(s.fell_back_to_general);
    CHECK(!s.used_full_support);
    CheckNear(s.sigma.probs, {0.0, 0.0, 0.0, 1.0}, 1e-6);
  }
  SUBCASE("fallback disabled") {
    config.allow_full_support_fallback = false;
    try {
      SolveMaxGini(cs, config);
      FAIL("expected a solver error");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::kFullSupportViolated);
    }
  }
}

TEST_CASE("epsilon below the minimum is reported infeasible") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  for (SolveEngine engine :
       {SolveEngine::kDualProjectedGradient, SolveEngine::kPrimalActiveSet}) {
    SolverConfig config;
    config.engine = engine;
    config.epsilon = -10.0;
    config.max_iters = 300000;
    try {
      SolveMaxGini(cs, config);
      FAIL("expected a solver error");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::kInfeasible);
    }
  }
}

TEST_CASE("gini never decreases along an epsilon sweep") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  double previous = -1.0;
  for (int k = 0; k <= 12; ++k) {
    SolverConfig config;
    config.epsilon = -0.45 + (2.25 - (-0.45)) * k / 12.0;
    const MgSolution s = SolveMaxGini(cs, config);
    CHECK(s.gini >= previous - 1e-7);
    previous = s.gini;
  }
}

TEST_CASE("per-row epsilon vectors are honored") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.epsilon_per_row = {0.5, 0.1, 0.5, 0.1};
  const MgSolution s = SolveMaxGini(cs, config);
  CHECK(std::isnan(s.epsilon_scalar));
  CHECK(s.epsilon_used == config.epsilon_per_row);
  const std::vector<double> viol = [&] {
    std::vector<double> out(cs.num_rows());
    for (int64_t i = 0; i < cs.num_rows(); ++i) {
      double acc = 0.0;
      for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k)
        acc += cs.rows.val[k] * s.sigma.probs[cs.rows.col[k]];
      out[i] = acc;
    }
    return out;
  }();
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    CHECK(viol[i] <= config.epsilon_per_row[i] + 1e-6);
  }

  config.epsilon_per_row = {0.5, 0.1};  // wrong length
  CHECK_THROWS_AS(SolveMaxGini(cs, config), std::runtime_error);
}

TEST_CASE("affine payoff transforms leave the solution unchanged") {
  const NormalFormGame game = RandomGame({2, 3}, 777);
  NormalFormGame scaled = game;
  const std::vector<double> c = {2.7, 0.15};
  const std::vector<double> d = {-4.2, 3.9};
  for (int p = 0; p < 2; ++p) {
    for (double& v : scaled.payoffs[p]) v = c[p] * v + d[p];
  }
  for (DeviationKind kind : {DeviationKind::kCe, DeviationKind::kCce}) {
    const ConstraintSystem base = kind == DeviationKind::kCe
                                      ? BuildCeConstraints(game)
                                      : BuildCceConstraints(game);
    const ConstraintSystem tran = kind == DeviationKind::kCe
                                      ? BuildCeConstraints(scaled)
                                      : BuildCceConstraints(scaled);
    SolverConfig config;
    const MgSolution a = SolveMaxGini(base, config);
    const MgSolution b = SolveMaxGini(tran, config);
    CheckNear(a.sigma.probs, b.sigma.probs, 1e-6);
  }
}

TEST_CASE("recovered primal always sums to one") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SeededSampler sampler(5);
  DualState dual;
  dual.alpha.resize(cs.num_rows());
  dual.beta.resize(cs.num_joint_actions());
  for (double& a : dual.alpha) a = std::abs(sampler.Gaussian());
  for (double& b : dual.beta) b = 0.1 * std::abs(sampler.Gaussian());

  const std::vector<double> plain = RecoverPrimal(cs, dual, nullptr);
  double sum = 0.0;
  for (double v : plain) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-12);

  const std::vector<double> counts = {1.0, 2.0, 3.0, 1.0};
  const std::vector<double> weighted = RecoverPrimal(cs, dual, &counts);
  double wsum = 0.0;
  for (size_t j = 0; j < weighted.size(); ++j) wsum += counts[j] * weighted[j];
  CHECK(std::abs(wsum - 1.0) <= 1e-12);
}

TEST_CASE("unit copy counts match the unweighted path") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  const std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
  SolverConfig config;
  const MgSolution plain = SolveMaxGini(cs, config);
  const MgSolution weighted = SolveMaxGini(cs, config, &ones);
  CHECK(plain.sigma.probs == weighted.sigma.probs);
}

TEST_CASE("fixed learning rate and raw rows still converge") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  config.learning_rate = 0.002;
  const MgSolution fixed_rate = SolveMaxGini(cs, config);
  CheckNear(fixed_rate.sigma.probs, kTrafficMg, 1e-6);
  CHECK(fixed_rate.learning_rate == 0.002);

  SolverConfig raw;
  raw.normalize_rows = false;
  const MgSolution unnormalized = SolveMaxGini(cs, raw);
  CheckNear(unnormalized.sigma.probs, kTrafficMg, 1e-6);
}

TEST_CASE("trivial systems short-circuit to the uniform point") {
  NormalFormGame trivial;
  trivial.actions_per_player = {1, 1};
  trivial.payoffs = {{3.0}, {4.0}};
  const ConstraintSystem cs = BuildCeConstraints(trivial);
  CHECK(cs.num_rows() == 0);
  SolverConfig config;
  const MgSolution s = SolveMaxGini(cs, config);
  CHECK(s.sigma.probs == std::vector<double>{1.0});
  CHECK(s.gini == 0.0);
  CHECK_THROWS_AS(OptimalLearningRate(cs, nullptr), std::runtime_error);
}

TEST_CASE("kkt certificate flags bad points") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  const MgSolution s = SolveMaxGini(cs, config);
  const std::vector<double> eps(cs.num_rows(), 0.0);

  const KktResiduals good = KktCertificate(cs, eps, s.raw_sigma, s.dual, nullptr);
  CHECK(good.Max() <= config.tol_kkt);

  // The uniform point is infeasible at epsilon zero and fails the check.
  DualState zero;
  zero.alpha.assign(cs.num_rows(), 0.0);
  zero.beta.assign(4, 0.0);
  const KktResiduals bad =
      KktCertificate(cs, eps, {0.25, 0.25, 0.25, 0.25}, zero, nullptr);
  CHECK(bad.primal_feasibility >= 2.25 - 1e-12);
}

TEST_CASE("solution text dump carries the full certificate") {
  const NormalFormGame game = TrafficLightsGame();
  const ConstraintSystem cs = BuildCeConstraints(game);
  SolverConfig config;
  const MgSolution s = SolveMaxGini(cs, config);
  std::ostringstream out;
  WriteSolutionText(out, s);
  const std::string text = out.str();
  for (const char* key :
       {"sigma:", "alpha:", "beta:", "lambda:", "gini:", "kkt_stationarity:",
        "iterations:", "learning_rate:"}) {
    CAPTURE(key);
    CHECK(text.find(key) != std::string::npos);
  }
}

}  // namespace
}  // namespace jointeq
