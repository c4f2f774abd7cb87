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
// Drives the command-line binary end to end: output contents, solution
// values against known equilibria, exit-code contract, and trace-file
// determinism. Invoked as: cli_test <path-to-binary>.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jointeq/normal_form.h"

namespace {

int g_failures = 0;

#define CLI_CHECK(cond)                                                   \
  do {                                                                    \
    if (!(cond)) {                                                        \
      ++g_failures;                                                       \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__,      \
                   #cond);                                                \
    }                                                                     \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

RunResult Run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.output += buf;
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Extracts the numbers following "key:" or "key=" on the line that starts
// with the key.
std::vector<double> NumbersOnLine(const std::string& text,
                                  const std::string& key) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(key, 0) != 0) continue;
    std::vector<double> out;
    std::string rest = line.substr(key.size());
    for (char& c : rest) {
      if (c == ',') c = ' ';
    }
    std::istringstream nums(rest);
    double v = 0.0;
    while (nums >> v) out.push_back(v);
    return out;
  }
  return {};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_test <path-to-binary>\n");
    return 2;
  }
  const std::string bin = argv[1];

  // --- list_solvers: registry table with capability flags ---
  {
    const RunResult r = Run(bin + " list_solvers");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(Contains(r.output, "mgcce"));
    CLI_CHECK(Contains(r.output, "external, not implemented"));
    // The randomized max-welfare CCE solver carries exactly these traits.
    std::istringstream lines(r.output);
    std::string line;
    bool saw_rmwcce = false;
    while (std::getline(lines, line)) {
      if (line.rfind("rmwcce", 0) != 0) continue;
      saw_rmwcce = true;
      CLI_CHECK(Contains(line, "joint"));
      CLI_CHECK(Contains(line, "cce"));
      CLI_CHECK(Contains(line, "max-val"));
      CLI_CHECK(Contains(line, "random"));
    }
    CLI_CHECK(saw_rmwcce);
  }

  // --- solve_nf at epsilon 0 reproduces the known max-Gini CE ---
  {
    const RunResult r =
        Run(bin + " solve_nf --game traffic_lights --solver mgce --epsilon 0");
    CLI_CHECK(r.exit_code == 0);
    const std::vector<double> sigma = NumbersOnLine(r.output, "sigma:");
    CLI_CHECK(sigma.size() == 4);
    if (sigma.size() == 4) {
      CLI_CHECK(std::abs(sigma[0] - 0.033) < 1e-2);
      CLI_CHECK(std::abs(sigma[1] - 0.327) < 1e-2);
      CLI_CHECK(std::abs(sigma[2] - 0.327) < 1e-2);
      CLI_CHECK(std::abs(sigma[3] - 0.313) < 1e-2);
    }
    CLI_CHECK(!NumbersOnLine(r.output, "gini:").empty());
    CLI_CHECK(!NumbersOnLine(r.output, "kkt_stationarity:").empty());
  }

  // --- the minimum-epsilon mode lands on the pure-coordination pair ---
  {
    const RunResult r = Run(
        bin + " solve_nf --game traffic_lights --solver mgce "
              "--epsilon-mode min");
    CLI_CHECK(r.exit_code == 0);
    const std::vector<double> sigma = NumbersOnLine(r.output, "sigma:");
    CLI_CHECK(sigma.size() == 4);
    if (sigma.size() == 4) {
      CLI_CHECK(std::abs(sigma[0] - 0.0) < 1e-4);
      CLI_CHECK(std::abs(sigma[1] - 0.5) < 1e-4);
      CLI_CHECK(std::abs(sigma[2] - 0.5) < 1e-4);
      CLI_CHECK(std::abs(sigma[3] - 0.0) < 1e-4);
    }
    const std::vector<double> eps = NumbersOnLine(r.output, "epsilon_scalar:");
    CLI_CHECK(eps.size() == 1 && std::abs(eps[0] + 0.5) < 1e-9);
  }

  // --- game files load, and --out mirrors stdout ---
  {
    jointeq::WriteGameFile(jointeq::MatchingPenniesGame(),
                           "/tmp/cli_test_game.txt");
    const RunResult r = Run(bin +
                            " solve_nf --game /tmp/cli_test_game.txt "
                            "--solver uniform --out /tmp/cli_test_dump.txt");
    CLI_CHECK(r.exit_code == 0);
    const std::vector<double> sigma = NumbersOnLine(r.output, "sigma:");
    CLI_CHECK(sigma.size() == 4);
    for (double v : sigma) CLI_CHECK(std::abs(v - 0.25) < 1e-15);
    CLI_CHECK(ReadFile("/tmp/cli_test_dump.txt") == r.output);
  }

  // --- configuration errors exit 2 with a diagnostic ---
  {
    CLI_CHECK(Run(bin + " solve_nf --game traffic_lights --solver nope")
                  .exit_code == 2);
    CLI_CHECK(Run(bin + " solve_nf --game traffic_lights --solver alpha_rank")
                  .exit_code == 2);
    CLI_CHECK(Run(bin + " solve_nf --game /tmp/no_such_game_file.txt "
                        "--solver mgcce")
                  .exit_code == 2);
    CLI_CHECK(Run(bin + " solve_nf --game traffic_lights --solver uniform "
                        "--epsilon-mode min")
                  .exit_code == 2);
    CLI_CHECK(Run(bin + " jpsro --game kuhn2p --br ce --meta-solver mgcce")
                  .exit_code == 2);
    CLI_CHECK(Run(bin + " jpsro --game nowhere").exit_code == 2);
    CLI_CHECK(Run(bin + " jpsro --game kuhn2p --badflag").exit_code == 2);
    CLI_CHECK(Run(bin + " --help").exit_code == 0);
  }

  // --- solver failures exit 3 ---
  {
    const RunResult r = Run(
        bin + " solve_nf --game traffic_lights --solver mgce --epsilon -1");
    CLI_CHECK(r.exit_code == 3);
    CLI_CHECK(Contains(r.output, "solver failure"));
  }

  // --- jpsro converges on two-player kuhn; traces are byte-identical ---
  {
    const std::string invocation =
        bin + " jpsro --game kuhn2p --meta-solver mgcce --seed 17"
              " --trace-out /tmp/cli_test_trace_";
    const RunResult a = Run(invocation + "a.txt");
    CLI_CHECK(a.exit_code == 0);
    CLI_CHECK(Contains(a.output, "terminated=converged"));
    CLI_CHECK(Contains(a.output, "iteration=0 solver=mgcce gap_ms="));
    const std::vector<double> value = NumbersOnLine(a.output,
                                                    "final_value_ms=");
    CLI_CHECK(value.size() == 2);
    if (value.size() == 2) {
      CLI_CHECK(std::abs(value[0] + 1.0 / 18.0) < 1e-6);
    }
    const RunResult b = Run(invocation + "b.txt");
    CLI_CHECK(b.exit_code == 0);
    const std::string trace_a = ReadFile("/tmp/cli_test_trace_a.txt");
    const std::string trace_b = ReadFile("/tmp/cli_test_trace_b.txt");
    CLI_CHECK(!trace_a.empty());
    CLI_CHECK(trace_a == trace_b);
    CLI_CHECK(!Contains(trace_a, "wall_ms"));
  }

  // --- jpsro out of budget exits 4 but still reports ---
  {
    const RunResult r =
        Run(bin + " jpsro --game kuhn2p --meta-solver mgcce --iterations 2");
    CLI_CHECK(r.exit_code == 4);
    CLI_CHECK(Contains(r.output, "terminated=max_iterations"));
  }

  if (g_failures == 0) {
    std::printf("cli_test: all checks passed\n");
    return 0;
  }
  std::fprintf(stderr, "cli_test: %d check(s) failed\n", g_failures);
  return 1;
}
