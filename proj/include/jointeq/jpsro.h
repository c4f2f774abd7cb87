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

#ifndef JOINTEQ_JPSRO_H_
#define JOINTEQ_JPSRO_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "jointeq/best_response.h"
#include "jointeq/efg.h"
#include "jointeq/mg_solver.h"
#include "jointeq/normal_form.h"

namespace jointeq {

enum class BrType { kCce, kCe };
enum class PoolSemantics { kMultiset, kSet };
enum class CeBrSelection { kMaxGapOnly, kAllPositiveSupport };
enum class PlayersPerIteration { kAll, kRoundRobin, kRandom };
enum class TerminationReason { kConverged, kMaxIterations };

// Solver tolerances forwarded to the per-iteration meta-solves. They run
// much tighter than the loop's gap tolerance so that the restricted-game
// residual never masquerades as full-game progress.
SolverConfig DefaultJpsroSolverConfig();

struct JpsroConfig {
  BrType br_type = BrType::kCce;
  // Registry keys. An empty eval_solver defaults to the randomized
  // max-welfare solver of the matching kind (rmwcce / rmwce).
  std::string meta_solver = "mgcce";
  std::string eval_solver;
  int max_iterations = 100;
  double gap_tolerance = 1e-6;
  PoolSemantics pool_semantics = PoolSemantics::kMultiset;
  CeBrSelection ce_br_selection = CeBrSelection::kMaxGapOnly;
  PlayersPerIteration players_per_iteration = PlayersPerIteration::kAll;
  uint64_t seed = 0;
  SolverConfig solver = DefaultJpsroSolverConfig();
};

// Equilibrium-gap report over one distribution: per-player clamped gaps and
// the underlying best-response results (one per player in CCE mode; one per
// positive-support recommendation, in player-major order, in CE mode).
struct GapReport {
  double total = 0.0;
  std::vector<double> per_player;
  std::vector<BrResult> responses;
  std::vector<int> response_player;  // aligned with `responses`
};

// CCEGap: per player, clamp(BR value - on-path value, 0), summed. The tie
// rule only affects which of several equally-good responses is reported,
// never the gap; RunJpsro passes a seeded rule so the responses it inserts
// explore tied branches.
GapReport CceGapReport(const EfgGame& game, const JointPolicyPool& pool,
                       const JointDistribution& sigma,
                       const NormalFormGame& meta,
                       const TieBreak& tie = TieBreak::LowestIndex());
// CEGap: per player, sum over positive-support recommendations of the
// recommendation's probability times its clamped conditional gap.
GapReport CeGapReport(const EfgGame& game, const JointPolicyPool& pool,
                      const JointDistribution& sigma,
                      const NormalFormGame& meta,
                      const TieBreak& tie = TieBreak::LowestIndex());

// True when sigma equals the outer product of its per-player marginals to
// within `tol` per cell (the precondition for reading a NE gap off it).
bool FactorizesAsProduct(const NormalFormGame& shape,
                         const JointDistribution& sigma, double tol = 1e-12);

struct IterationRecord {
  int iteration = 0;
  std::vector<int> pool_sizes;   // before this iteration's insertions
  JointDistribution sigma;       // meta-solver distribution
  double gap_ms_total = 0.0;     // clamped gap under the meta-solver sigma
  std::vector<double> gap_ms;
  double gap_mw_total = 0.0;     // clamped gap under the eval-solver sigma
  std::vector<double> gap_mw;
  std::vector<double> value_ms;  // per-player values under each sigma
  std::vector<double> value_mw;
  // NE gap when sigma factorizes as a product distribution, NaN otherwise.
  double ne_gap = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> unique_policies;
  double wall_ms = 0.0;
};

struct JpsroTrace {
  std::vector<IterationRecord> records;
  JointPolicyPool final_pool;
  TerminationReason termination = TerminationReason::kMaxIterations;
  std::string meta_solver;
  std::string eval_solver;
  // False for meta-solvers without an equilibrium guarantee (uniform,
  // random): the loop then runs without the convergence argument.
  bool progress_guarantee = true;
};

// The full training loop: evaluate the restricted game over the pool, solve
// it with the meta-solver, measure gaps under both the meta-solver and
// eval-solver distributions, and insert exact best responses until the
// meta-solver distribution's full-game gap reaches gap_tolerance (checked
// before insertion) or the iteration budget runs out.
JpsroTrace RunJpsro(const EfgGame& game, const JpsroConfig& config);

// One line per record with stable keys:
//   iteration= solver= gap_ms= gap_mw= value_ms= value_mw= unique=
//   pool_size= wall_ms=
// Vector fields are comma-joined; numbers print with round-trip precision.
// Trace files written as experiment artifacts pass include_wall_ms = false,
// which drops the only nondeterministic field so reruns with the same
// configuration and seed are byte-identical.
void WriteTraceText(const JpsroTrace& trace, std::ostream& out,
                    bool include_wall_ms = true);

}  // namespace jointeq

#endif  // JOINTEQ_JPSRO_H_
