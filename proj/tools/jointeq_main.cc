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
// Batch experiment driver. Three subcommands:
//
//   solve_nf      solve one normal-form game with a registered meta-solver
//   jpsro         run the joint policy-space response oracle training loop
//   list_solvers  print the meta-solver registry with capability flags
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 jpsro ran out of iterations before reaching the gap tolerance
// (informational; the trace and summary are still written).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jointeq/baselines.h"
#include "jointeq/efg.h"
#include "jointeq/errors.h"
#include "jointeq/games.h"
#include "jointeq/jpsro.h"
#include "jointeq/meta_solvers.h"
#include "jointeq/mg_solver.h"
#include "jointeq/normal_form.h"

namespace jointeq {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNotConverged = 4;

NormalFormGame LoadNormalFormGame(const std::string& spec) {
  if (spec == "traffic_lights") return TrafficLightsGame();
  if (spec == "matching_pennies") return MatchingPenniesGame();
  if (spec == "prisoners_dilemma") return PrisonersDilemmaGame();
  std::ifstream probe(spec);
  if (!probe) {
    throw std::invalid_argument("--game '" + spec +
                                "' is not a built-in name or readable file");
  }
  return ParseGameText(probe);
}

EfgGame LoadEfg(const std::string& name) {
  if (name == "kuhn2p") return KuhnPokerGame(2);
  if (name == "kuhn3p") return KuhnPokerGame(3);
  if (name == "trade_comm") return TradeCommGame();
  if (name == "sheriff") return SheriffGame();
  if (name == "traffic_lights") return MatrixGameAsEfg(TrafficLightsGame());
  if (name == "matching_pennies") {
    return MatrixGameAsEfg(MatchingPenniesGame());
  }
  if (name == "prisoners_dilemma") {
    return MatrixGameAsEfg(PrisonersDilemmaGame());
  }
  throw std::invalid_argument("unknown game: " + name);
}

// Returns kExitConfig after printing a diagnostic.
int ConfigError(const std::string& message) {
  std::cerr << "configuration error: " << message << '\n';
  return kExitConfig;
}

// Checks the key against the registry; distinguishes unknown keys from
// listed-but-external solvers in the diagnostic.
bool SolverUsable(const std::string& key, std::string* why) {
  for (const MetaSolverEntry& entry : ListMetaSolvers()) {
    if (entry.name != key) continue;
    if (entry.fn != nullptr) return true;
    *why = "meta-solver '" + key + "' is " + entry.note;
    return false;
  }
  *why = "unknown meta-solver '" + key + "' (see list_solvers)";
  return false;
}

struct SolveNfArgs {
  std::string game;
  std::string solver = "mgcce";
  std::string epsilon_mode = "fixed";
  double epsilon = 0.0;
  bool epsilon_set = false;
  uint64_t seed = 0;
  std::string out;
};

int RunSolveNf(const SolveNfArgs& args) {
  std::string why;
  if (!SolverUsable(args.solver, &why)) return ConfigError(why);

  const bool mg_family = args.solver == "mgce" || args.solver == "mgcce";
  if (!mg_family && args.epsilon_mode != "fixed") {
    return ConfigError("--epsilon-mode applies only to the mgce/mgcce "
                       "solvers; other registry entries fix their own mode");
  }
  if (!mg_family && args.epsilon_set) {
    return ConfigError("--epsilon applies only to the mgce/mgcce solvers");
  }
  if (args.epsilon_set && args.epsilon_mode != "fixed") {
    return ConfigError("--epsilon is only meaningful with "
                       "--epsilon-mode fixed; the other modes compute it");
  }

  const NormalFormGame game = LoadNormalFormGame(args.game);

  std::ostringstream dump;
  if (mg_family) {
    EpsilonMode mode = EpsilonMode::kFixed;
    if (args.epsilon_mode == "fixed") {
      mode = EpsilonMode::kFixed;
    } else if (args.epsilon_mode == "max-ab") {
      mode = EpsilonMode::kMaxAb;
    } else if (args.epsilon_mode == "half-max-ab") {
      mode = EpsilonMode::kHalfMaxAb;
    } else if (args.epsilon_mode == "full-support") {
      mode = EpsilonMode::kFullSupportMin;
    } else if (args.epsilon_mode == "min") {
      mode = EpsilonMode::kMinEpsilon;
    } else {
      return ConfigError("unknown --epsilon-mode '" + args.epsilon_mode +
                         "'");
    }

    const ConstraintSystem cs = args.solver == "mgce"
                                    ? BuildCeConstraints(game, 0.0)
                                    : BuildCceConstraints(game, 0.0);
    SolverConfig config;
    config.epsilon_mode = mode;
    config.epsilon = args.epsilon;
    // Same engine policy as the registry wrappers: exact active-set QP for
    // small systems, first-order dual engine above the size cutoff.
    const double qp_cost = static_cast<double>(cs.num_rows()) *
                           static_cast<double>(cs.num_joint_actions());
    config.engine = (cs.num_joint_actions() <= 512 && qp_cost <= 5e6)
                        ? SolveEngine::kPrimalActiveSet
                        : SolveEngine::kDualProjectedGradient;
    const MgSolution solution = SolveMaxGini(cs, config, nullptr);
    WriteSolutionText(dump, solution);
  } else {
    MetaSolverContext context;
    context.seed = args.seed;
    const JointDistribution sigma = RunMetaSolver(args.solver, game, context);
    dump << "joint_actions: " << sigma.probs.size() << '\n';
    dump << "sigma:";
    char buf[40];
    for (double v : sigma.probs) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      dump << ' ' << buf;
    }
    dump << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", sigma.Gini());
    dump << "gini: " << buf << '\n';
  }

  std::cout << dump.str();
  if (!args.out.empty()) {
    std::ofstream file(args.out);
    if (!file) return ConfigError("cannot open --out path " + args.out);
    file << dump.str();
  }
  return kExitOk;
}

struct JpsroArgs {
  std::string game;
  std::string meta_solver = "mgcce";
  std::string eval_solver;
  std::string br = "cce";
  int iterations = 100;
  double gap_tolerance = 1e-6;
  uint64_t seed = 0;
  std::string trace_out;
};

int RunJpsroCommand(const JpsroArgs& args) {
  std::string why;
  if (!SolverUsable(args.meta_solver, &why)) return ConfigError(why);
  if (!args.eval_solver.empty() && !SolverUsable(args.eval_solver, &why)) {
    return ConfigError(why);
  }
  if (args.br != "cce" && args.br != "ce") {
    return ConfigError("--br must be cce or ce");
  }
  if (args.br == "ce" && !FindMetaSolver(args.meta_solver).flags.ce) {
    return ConfigError("--br ce needs a meta-solver whose output is a "
                       "correlated equilibrium; '" +
                       args.meta_solver + "' does not guarantee one");
  }
  if (args.iterations <= 0) {
    return ConfigError("--iterations must be positive");
  }

  const EfgGame game = LoadEfg(args.game);

  JpsroConfig config;
  config.br_type = args.br == "ce" ? BrType::kCe : BrType::kCce;
  config.meta_solver = args.meta_solver;
  config.eval_solver = args.eval_solver;
  config.max_iterations = args.iterations;
  config.gap_tolerance = args.gap_tolerance;
  config.seed = args.seed;

  const JpsroTrace trace = RunJpsro(game, config);

  WriteTraceText(trace, std::cout);
  if (!args.trace_out.empty()) {
    std::ofstream file(args.trace_out);
    if (!file) return ConfigError("cannot open --trace-out path " +
                                  args.trace_out);
    // Trace files are deterministic artifacts: wall time is omitted so
    // reruns with the same configuration and seed are byte-identical.
    WriteTraceText(trace, file, /*include_wall_ms=*/false);
  }

  const IterationRecord& last = trace.records.back();
  const bool converged = trace.termination == TerminationReason::kConverged;
  double total_wall = 0.0;
  for (const IterationRecord& r : trace.records) total_wall += r.wall_ms;
  char buf[40];
  std::cout << "terminated=" << (converged ? "converged" : "max_iterations")
            << '\n';
  std::cout << "iterations=" << trace.records.size() << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", last.gap_ms_total);
  std::cout << "final_gap_ms=" << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", last.gap_mw_total);
  std::cout << "final_gap_mw=" << buf << '\n';
  std::cout << "final_value_ms=";
  for (std::size_t p = 0; p < last.value_ms.size(); ++p) {
    std::snprintf(buf, sizeof(buf), "%.17g", last.value_ms[p]);
    std::cout << (p == 0 ? "" : ",") << buf;
  }
  std::cout << '\n';
  std::cout << "pool_size=";
  const std::vector<int> sizes = trace.final_pool.sizes();
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    std::cout << (p == 0 ? "" : ",") << sizes[p];
  }
  std::cout << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", total_wall);
  std::cout << "total_wall_ms=" << buf << '\n';
  return converged ? kExitOk : kExitNotConverged;
}

int RunListSolvers() {
  std::cout << "name             flags                              note\n";
  for (const MetaSolverEntry& entry : ListMetaSolvers()) {
    std::string flags;
    const auto add = [&flags](bool on, const char* tag) {
      if (!on) return;
      if (!flags.empty()) flags += ',';
      flags += tag;
    };
    add(entry.flags.joint, "joint");
    add(entry.flags.cce, "cce");
    add(entry.flags.ce, "ce");
    add(entry.flags.max_value, "max-val");
    add(entry.flags.max_entropy, "max-ent");
    add(entry.flags.randomized, "random");
    add(entry.flags.approximate, "approx");
    if (flags.empty()) flags = "-";
    std::cout << entry.name;
    for (std::size_t i = entry.name.size(); i < 17; ++i) std::cout << ' ';
    std::cout << flags;
    for (std::size_t i = flags.size(); i < 35; ++i) std::cout << ' ';
    std::cout << entry.note << '\n';
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{
      "Equilibrium solvers for normal-form games and the joint "
      "policy-space response oracle training loop"};
  app.require_subcommand(1);

  SolveNfArgs nf;
  CLI::App* solve_nf = app.add_subcommand(
      "solve_nf", "Solve one normal-form game with a registered meta-solver");
  solve_nf->add_option("--game", nf.game,
                       "Built-in name (traffic_lights, matching_pennies, "
                       "prisoners_dilemma) or game file path")
      ->required();
  solve_nf->add_option("--solver", nf.solver,
                       "Meta-solver registry key (see list_solvers)");
  solve_nf->add_option("--epsilon-mode", nf.epsilon_mode,
                       "fixed | max-ab | half-max-ab | full-support | min "
                       "(mgce/mgcce only)");
  solve_nf->add_option("--epsilon", nf.epsilon,
                       "Scalar epsilon for --epsilon-mode fixed");
  solve_nf->add_option("--seed", nf.seed, "Seed for randomized solvers");
  solve_nf->add_option("--out", nf.out, "Also write the solution dump here");

  JpsroArgs jp;
  CLI::App* jpsro = app.add_subcommand(
      "jpsro", "Run the joint policy-space response oracle loop");
  jpsro->add_option("--game", jp.game,
                    "kuhn2p | kuhn3p | trade_comm | sheriff | "
                    "traffic_lights | matching_pennies | prisoners_dilemma")
      ->required();
  jpsro->add_option("--meta-solver", jp.meta_solver,
                    "Meta-solver registry key (see list_solvers)");
  jpsro->add_option("--eval-solver", jp.eval_solver,
                    "Evaluation distribution solver; defaults to the "
                    "randomized max-welfare solver of the matching kind");
  jpsro->add_option("--br", jp.br, "Best-response mode: cce | ce");
  jpsro->add_option("--iterations", jp.iterations, "Iteration budget");
  jpsro->add_option("--gap-tolerance", jp.gap_tolerance,
                    "Stop when the meta-solver distribution's full-game "
                    "gap reaches this");
  jpsro->add_option("--seed", jp.seed, "Base seed for the run");
  jpsro->add_option("--trace-out", jp.trace_out,
                    "Write the deterministic iteration trace here");

  app.add_subcommand("list_solvers",
                     "Print the meta-solver registry with capability flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  nf.epsilon_set = solve_nf->count("--epsilon") > 0;

  try {
    if (solve_nf->parsed()) return RunSolveNf(nf);
    if (jpsro->parsed()) return RunJpsroCommand(jp);
    return RunListSolvers();
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    return ConfigError(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace
}  // namespace jointeq

int main(int argc, char** argv) { return jointeq::Main(argc, argv); }
