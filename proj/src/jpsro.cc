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

#include "jointeq/jpsro.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "jointeq/check.h"
#include "jointeq/meta_game.h"
#include "jointeq/meta_solvers.h"
#include "jointeq/rng.h"

namespace jointeq {
namespace {

double Clamp0(double v) { return v > 0.0 ? v : 0.0; }

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string JoinDoubles(const std::vector<double>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += FormatDouble(values[i]);
  }
  return out;
}

std::string JoinInts(const std::vector<int>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

// Deterministic per-iteration seed derivation, so reruns with one config
// seed replay exactly while the two solvers and successive iterations stay
// decorrelated.
uint64_t DeriveSeed(uint64_t base, int iteration, int role) {
  uint64_t x = base + 0x9E3779B97F4A7C15ull *
                          (2ull * static_cast<uint64_t>(iteration) + 1ull + role);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace

SolverConfig DefaultJpsroSolverConfig() {
  SolverConfig config;
  config.tol_kkt = 1e-9;
  return config;
}

GapReport CceGapReport(const EfgGame& game, const JointPolicyPool& pool,
                       const JointDistribution& sigma,
                       const NormalFormGame& meta, const TieBreak& tie) {
  GapReport report;
  report.per_player.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const TieBreak local =
        tie.randomized ? TieBreak::Seeded(DeriveSeed(tie.seed, p, 0)) : tie;
    BrResult br =
        BestResponseCce(game, pool, sigma, p, &meta.payoffs[p], local);
    report.per_player[p] = Clamp0(br.gap);
    report.total += report.per_player[p];
    report.response_player.push_back(p);
    report.responses.push_back(std::move(br));
  }
  return report;
}

GapReport CeGapReport(const EfgGame& game, const JointPolicyPool& pool,
                      const JointDistribution& sigma,
                      const NormalFormGame& meta, const TieBreak& tie) {
  GapReport report;
  report.per_player.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const std::vector<double> marginal = sigma.Marginal(meta, p);
    double gap_p = 0.0;
    for (size_t j = 0; j < marginal.size(); ++j) {
      if (marginal[j] <= 0.0) continue;
      const TieBreak local =
          tie.randomized
              ? TieBreak::Seeded(DeriveSeed(tie.seed, p, static_cast<int>(j)))
              : tie;
      BrResult br = BestResponseCe(game, pool, sigma, p, static_cast<int>(j),
                                   &meta.payoffs[p], local);
      gap_p += marginal[j] * Clamp0(br.gap);
      report.response_player.push_back(p);
      report.responses.push_back(std::move(br));
    }
    report.per_player[p] = gap_p;
    report.total += gap_p;
  }
  return report;
}

bool FactorizesAsProduct(const NormalFormGame& shape,
                         const JointDistribution& sigma, double tol) {
  const int n = shape.num_players();
  std::vector<std::vector<double>> marginals(n);
  for (int p = 0; p < n; ++p) marginals[p] = sigma.Marginal(shape, p);
  const auto strides = shape.Strides();
  for (int64_t j = 0; j < static_cast<int64_t>(sigma.probs.size()); ++j) {
    double product = 1.0;
    for (int p = 0; p < n; ++p) {
      product *= marginals[p][(j / strides[p]) % shape.actions_per_player[p]];
    }
    if (std::abs(product - sigma.probs[j]) > tol) return false;
  }
  return true;
}

JpsroTrace RunJpsro(const EfgGame& game, const JpsroConfig& config) {
  JEQ_CHECK_GE(config.max_iterations, 1);
  JEQ_CHECK_GE(config.gap_tolerance, 0.0);

  const MetaSolverEntry& meta_entry = FindMetaSolver(config.meta_solver);
  if (config.br_type == BrType::kCe) {
    // Conditional best responses only converge against CE-producing
    // solvers; reject the combination outright rather than looping forever.
    JEQ_CHECK_TRUE(meta_entry.flags.ce);
  }
  const std::string eval_name =
      !config.eval_solver.empty()
          ? config.eval_solver
          : (config.br_type == BrType::kCe ? "rmwce" : "rmwcce");
  const MetaSolverEntry& eval_entry = FindMetaSolver(eval_name);
  JEQ_CHECK_TRUE(eval_entry.fn != nullptr);

  JpsroTrace trace;
  trace.meta_solver = config.meta_solver;
  trace.eval_solver = eval_name;
  trace.progress_guarantee = meta_entry.flags.cce || meta_entry.flags.ce;

  JointPolicyPool pool(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    pool.Add(p, UniformPolicy(game, p), 0);
  }

  MetaGameCache cache(&game);
  SeededSampler player_picker(config.seed);

  for (int t = 0; t < config.max_iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();

    const NormalFormGame meta = cache.Tensor(pool);

    MetaSolverContext ms_context;
    ms_context.seed = DeriveSeed(config.seed, t, 0);
    ms_context.solver = config.solver;
    const JointDistribution sigma_ms =
        RunMetaSolver(config.meta_solver, meta, ms_context);

    MetaSolverContext eval_context;
    eval_context.seed = DeriveSeed(config.seed, t, 1);
    eval_context.solver = config.solver;
    const JointDistribution sigma_mw =
        RunMetaSolver(eval_name, meta, eval_context);

    const bool ce_mode = config.br_type == BrType::kCe;
    // Responses from this report are the insertion candidates: a seeded tie
    // rule lets them explore branches the lowest-index rule never takes.
    const TieBreak br_tie = TieBreak::Seeded(DeriveSeed(config.seed, t, 2));
    const GapReport ms_report =
        ce_mode ? CeGapReport(game, pool, sigma_ms, meta, br_tie)
                : CceGapReport(game, pool, sigma_ms, meta, br_tie);
    const GapReport mw_report =
        ce_mode ? CeGapReport(game, pool, sigma_mw, meta)
                : CceGapReport(game, pool, sigma_mw, meta);

    IterationRecord record;
    record.iteration = t;
    record.pool_sizes = pool.sizes();
    record.sigma = sigma_ms;
    record.gap_ms_total = ms_report.total;
    record.gap_ms = ms_report.per_player;
    record.gap_mw_total = mw_report.total;
    record.gap_mw = mw_report.per_player;
    record.value_ms = ExpectedValues(meta, sigma_ms);
    record.value_mw = ExpectedValues(meta, sigma_mw);
    record.unique_policies = pool.UniqueCounts();
    if (FactorizesAsProduct(meta, sigma_ms)) {
      if (!ce_mode) {
        record.ne_gap = ms_report.total;
      } else {
        record.ne_gap = CceGapReport(game, pool, sigma_ms, meta).total;
      }
    }

    const bool converged = ms_report.total <= config.gap_tolerance;
    if (!converged) {
      // Insert best responses for the scheduled players. The responses were
      // computed under the meta-solver distribution above.
      std::vector<int> scheduled;
      switch (config.players_per_iteration) {
        case PlayersPerIteration::kAll:
          for (int p = 0; p < game.num_players(); ++p) scheduled.push_back(p);
          break;
        case PlayersPerIteration::kRoundRobin:
          scheduled.push_back(t % game.num_players());
          break;
        case PlayersPerIteration::kRandom:
          scheduled.push_back(
              static_cast<int>(player_picker.UniformInt(game.num_players())));
          break;
      }
      for (int p : scheduled) {
        std::vector<const BrResult*> candidates;
        if (!ce_mode) {
          for (size_t i = 0; i < ms_report.responses.size(); ++i) {
            if (ms_report.response_player[i] == p) {
              candidates.push_back(&ms_report.responses[i]);
            }
          }
        } else {
          const BrResult* best = nullptr;
          for (size_t i = 0; i < ms_report.responses.size(); ++i) {
            if (ms_report.response_player[i] != p) continue;
            if (config.ce_br_selection == CeBrSelection::kAllPositiveSupport) {
              candidates.push_back(&ms_report.responses[i]);
            } else if (best == nullptr ||
                       ms_report.responses[i].gap > best->gap) {
              best = &ms_report.responses[i];
            }
          }
          if (best != nullptr) candidates.push_back(best);
        }
        for (const BrResult* candidate : candidates) {
          TabularPolicy canonical =
              CanonicalizePolicy(game, p, candidate->policy);
          if (config.pool_semantics == PoolSemantics::kMultiset) {
            pool.Add(p, std::move(canonical), t);
          } else {
            pool.AddIfNew(p, std::move(canonical), t);
          }
        }
      }
    }

    record.wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    trace.records.push_back(std::move(record));

    if (converged) {
      trace.termination = TerminationReason::kConverged;
      break;
    }
  }

  trace.final_pool = std::move(pool);
  return trace;
}

void WriteTraceText(const JpsroTrace& trace, std::ostream& out,
                    bool include_wall_ms) {
  for (const IterationRecord& r : trace.records) {
    out << "iteration=" << r.iteration << " solver=" << trace.meta_solver
        << " gap_ms=" << FormatDouble(r.gap_ms_total)
        << " gap_mw=" << FormatDouble(r.gap_mw_total)
        << " value_ms=" << JoinDoubles(r.value_ms)
        << " value_mw=" << JoinDoubles(r.value_mw)
        << " unique=" << JoinInts(r.unique_policies)
        << " pool_size=" << JoinInts(r.pool_sizes);
    if (include_wall_ms) {
      out << " wall_ms=" << FormatDouble(r.wall_ms);
    }
    out << '\n';
  }
}

}  // namespace jointeq
