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

#include "jointeq/meta_solvers.h"

#include <algorithm>
#include <map>
#include <utility>

#include "jointeq/baselines.h"
#include "jointeq/check.h"
#include "jointeq/lp_solvers.h"
#include "jointeq/rng.h"

namespace jointeq {
namespace {

// Repeat-reduction wrapper for the max-Gini solvers: collapse duplicate
// actions, fold the copy multiplicities into the constraint rows and the
// objective, solve the weighted program, and expand back per copy.
//
// Folding rule per entry at reduced joint action j with copy counts
// r_p(a_p):  CCE rows scale by prod_p r_p(j_p);  CE rows of player p scale
// by prod_{q != p} r_q(j_q)  (the recommendation is a single original
// action, so the player's own multiplicity does not multiply the row).
void FoldReductionWeights(const NormalFormGame& reduced,
                          const ReductionMap& map, ConstraintSystem* cs) {
  const int64_t n = reduced.num_joint_actions();
  const int num_players = reduced.num_players();
  std::vector<double> r(n, 1.0);
  std::vector<std::vector<double>> own_count(
      num_players, std::vector<double>(n, 1.0));
  for (int64_t j = 0; j < n; ++j) {
    const std::vector<int> actions = reduced.UnflattenIndex(j);
    for (int p = 0; p < num_players; ++p) {
      const double c = static_cast<double>(map.repeat_counts[p][actions[p]]);
      r[j] *= c;
      own_count[p][j] = c;
    }
  }
  for (int64_t i = 0; i < cs->num_rows(); ++i) {
    const DeviationTag& tag = cs->row_index[i];
    for (int64_t k = cs->rows.row_start[i]; k < cs->rows.row_start[i + 1];
         ++k) {
      const int64_t j = cs->rows.col[k];
      double factor = r[j];
      if (cs->kind == DeviationKind::kCe) factor /= own_count[tag.player][j];
      cs->rows.val[k] *= factor;
    }
  }
}

std::vector<double> CopyCounts(const NormalFormGame& reduced,
                               const ReductionMap& map) {
  const int64_t n = reduced.num_joint_actions();
  const int num_players = reduced.num_players();
  std::vector<double> r(n, 1.0);
  for (int64_t j = 0; j < n; ++j) {
    const std::vector<int> actions = reduced.UnflattenIndex(j);
    for (int p = 0; p < num_players; ++p) {
      r[j] *= static_cast<double>(map.repeat_counts[p][actions[p]]);
    }
  }
  return r;
}

JointDistribution SolveMgFamily(const NormalFormGame& game,
                                const MetaSolverContext& context,
                                DeviationKind kind, EpsilonMode mode) {
  const ReducedGame reduced = EliminateRepeatedActions(game);
  ConstraintSystem cs = kind == DeviationKind::kCe
                            ? BuildCeConstraints(reduced.game, 0.0)
                            : BuildCceConstraints(reduced.game, 0.0);
  FoldReductionWeights(reduced.game, reduced.map, &cs);
  const std::vector<double> counts = CopyCounts(reduced.game, reduced.map);

  SolverConfig config = context.solver;
  config.epsilon_mode = mode;
  if (mode == EpsilonMode::kFixed) config.epsilon = 0.0;
  config.epsilon_per_row.clear();

  // Engine policy: small reduced systems go to the exact active-set QP,
  // which is immune to the slow dual convergence of near-degenerate
  // (point-mass) meta-game optima; everything larger uses the scalable
  // first-order dual engine.
  const double qp_cost = static_cast<double>(cs.num_rows()) *
                         static_cast<double>(cs.num_joint_actions());
  if (cs.num_joint_actions() <= 512 && qp_cost <= 5e6) {
    config.engine = SolveEngine::kPrimalActiveSet;
  } else {
    config.engine = SolveEngine::kDualProjectedGradient;
  }

  const MgSolution solution = SolveMaxGini(cs, config, &counts);
  return ExpandDistribution(game, reduced.game, reduced.map,
                            solution.sigma.probs);
}

JointDistribution SolveLpFamily(const NormalFormGame& game,
                                const MetaSolverContext& context,
                                DeviationKind kind, bool max_welfare,
                                bool randomized_welfare) {
  const ConstraintSystem cs = kind == DeviationKind::kCe
                                  ? BuildCeConstraints(game, 0.0)
                                  : BuildCceConstraints(game, 0.0);
  if (max_welfare && randomized_welfare) {
    return SolveRandomMaxWelfare(cs, game, context.seed);
  }
  if (max_welfare) {
    return SolveMaxWelfare(cs, game, context.seed);
  }
  return SolveRandomVertex(cs, context.seed);
}

std::map<std::string, MetaSolverEntry>& Registry() {
  static std::map<std::string, MetaSolverEntry>* registry = [] {
    auto* reg = new std::map<std::string, MetaSolverEntry>();
    const auto add = [&](MetaSolverEntry entry) {
      (*reg)[entry.name] = std::move(entry);
    };

    MetaSolverFlags base;

    // Baselines.
    {
      MetaSolverFlags f = base;
      f.max_entropy = true;
      add({"uniform", f,
           [](const NormalFormGame& game, const MetaSolverContext&) {
             return UniformJoint(game.num_joint_actions());
           },
           "uniform mass over joint actions"});
    }
    {
      MetaSolverFlags f = base;
      f.joint = true;
      f.randomized = true;
      add({"random_dirichlet", f,
           [](const NormalFormGame& game, const MetaSolverContext& ctx) {
             SeededSampler sampler(ctx.seed);
             return RandomDirichlet(game.num_joint_actions(), &sampler);
           },
           "uniform draw from the joint simplex"});
      add({"random_joint", f,
           [](const NormalFormGame& game, const MetaSolverContext& ctx) {
             SeededSampler sampler(ctx.seed);
             return RandomJoint(game.num_joint_actions(), &sampler);
           },
           "point mass on a random joint action"});
    }

    // LP family over the (C)CE polytopes.
    const auto add_lp = [&](const std::string& name, DeviationKind kind,
                            bool mw, bool rand_mw, const std::string& note) {
      MetaSolverFlags f = base;
      f.joint = true;
      f.cce = true;
      f.ce = kind == DeviationKind::kCe;
      f.max_value = mw;
      f.randomized = !mw || rand_mw;
      add({name, f,
           [kind, mw, rand_mw](const NormalFormGame& game,
                               const MetaSolverContext& ctx) {
             return SolveLpFamily(game, ctx, kind, mw, rand_mw);
           },
           note});
    };
    add_lp("mwce", DeviationKind::kCe, true, false, "maximum-welfare CE");
    add_lp("mwcce", DeviationKind::kCce, true, false, "maximum-welfare CCE");
    add_lp("rmwce", DeviationKind::kCe, true, true,
           "random vertex of the maximum-welfare CE face");
    add_lp("rmwcce", DeviationKind::kCce, true, true,
           "random vertex of the maximum-welfare CCE face");
    add_lp("rvce", DeviationKind::kCe, false, false,
           "random vertex of the CE polytope");
    add_lp("rvcce", DeviationKind::kCce, false, false,
           "random vertex of the CCE polytope");

    // Max-Gini family.
    const auto add_mg = [&](const std::string& name, DeviationKind kind,
                            EpsilonMode mode, bool approximate,
                            const std::string& note) {
      MetaSolverFlags f = base;
      f.joint = true;
      f.cce = true;
      f.ce = kind == DeviationKind::kCe;
      f.max_entropy = true;
      f.approximate = approximate;
      add({name, f,
           [kind, mode](const NormalFormGame& game,
                        const MetaSolverContext& ctx) {
             return SolveMgFamily(game, ctx, kind, mode);
           },
           note});
    };
    add_mg("mgce", DeviationKind::kCe, EpsilonMode::kFixed, false,
           "maximum-Gini CE at epsilon 0");
    add_mg("mgcce", DeviationKind::kCce, EpsilonMode::kFixed, false,
           "maximum-Gini CCE at epsilon 0");
    add_mg("eps_mgce", DeviationKind::kCe, EpsilonMode::kHalfMaxAb, true,
           "maximum-Gini approximate CE at epsilon max(Ab)/2");
    add_mg("eps_mgcce", DeviationKind::kCce, EpsilonMode::kHalfMaxAb, true,
           "maximum-Gini approximate CCE at epsilon max(Ab)/2");
    add_mg("min_eps_mgce", DeviationKind::kCe, EpsilonMode::kMinEpsilon, false,
           "maximum-Gini CE at the smallest feasible epsilon");
    add_mg("min_eps_mgcce", DeviationKind::kCce, EpsilonMode::kMinEpsilon,
           false, "maximum-Gini CCE at the smallest feasible epsilon");
    add_mg("full_eps_mgce", DeviationKind::kCe, EpsilonMode::kFullSupportMin,
           true, "maximum-Gini CE at the smallest full-support epsilon");
    add_mg("full_eps_mgcce", DeviationKind::kCce,
           EpsilonMode::kFullSupportMin, true,
           "maximum-Gini CCE at the smallest full-support epsilon");

    // Known solvers from the wider literature, listed for completeness but
    // implemented elsewhere.
    add({"alpha_rank", base, nullptr, "external, not implemented"});
    add({"prd", base, nullptr, "external, not implemented"});
    return reg;
  }();
  return *registry;
}

}  // namespace

void RegisterMetaSolver(const MetaSolverEntry& entry) {
  JEQ_CHECK_TRUE(!entry.name.empty());
  Registry()[entry.name] = entry;
}

const MetaSolverEntry& FindMetaSolver(const std::string& name) {
  auto& registry = Registry();
  const auto it = registry.find(name);
  if (it == registry.end()) {
    FatalError("unknown meta-solver '" + name + "'");
  }
  if (!it->second.fn) {
    FatalError("meta-solver '" + name + "' is not callable: " +
               it->second.note);
  }
  return it->second;
}

bool MetaSolverAvailable(const std::string& name) {
  auto& registry = Registry();
  const auto it = registry.find(name);
  return it != registry.end() && static_cast<bool>(it->second.fn);
}

std::vector<MetaSolverEntry> ListMetaSolvers() {
  std::vector<MetaSolverEntry> out;
  for (const auto& [name, entry] : Registry()) out.push_back(entry);
  return out;
}

JointDistribution RunMetaSolver(const std::string& name,
                                const NormalFormGame& game,
                                const MetaSolverContext& context) {
  return FindMetaSolver(name).fn(game, context);
}

}  // namespace jointeq
