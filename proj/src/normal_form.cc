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

#include "jointeq/normal_form.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "jointeq/check.h"
#include "jointeq/logging.h"

namespace jointeq {

int64_t NormalFormGame::num_joint_actions() const {
  int64_t n = 1;
  for (int a : actions_per_player) n *= a;
  return n;
}

std::vector<int64_t> NormalFormGame::Strides() const {
  const int n = num_players();
  std::vector<int64_t> strides(n, 1);
  for (int p = n - 2; p >= 0; --p) {
    strides[p] = strides[p + 1] * actions_per_player[p + 1];
  }
  return strides;
}

int64_t NormalFormGame::FlatIndex(const std::vector<int>& actions) const {
  JEQ_CHECK_EQ(actions.size(), actions_per_player.size());
  int64_t idx = 0;
  for (int p = 0; p < num_players(); ++p) {
    JEQ_CHECK_GE(actions[p], 0);
    JEQ_CHECK_LT(actions[p], actions_per_player[p]);
    idx = idx * actions_per_player[p] + actions[p];
  }
  return idx;
}

std::vector<int> NormalFormGame::UnflattenIndex(int64_t flat) const {
  std::vector<int> actions(num_players());
  for (int p = num_players() - 1; p >= 0; --p) {
    actions[p] = static_cast<int>(flat % actions_per_player[p]);
    flat /= actions_per_player[p];
  }
  return actions;
}

void NormalFormGame::Validate() const {
  JEQ_CHECK_GE(num_players(), 1);
  for (int a : actions_per_player) JEQ_CHECK_GE(a, 1);
  JEQ_CHECK_EQ(static_cast<int>(payoffs.size()), num_players());
  for (const auto& tensor : payoffs) {
    JEQ_CHECK_EQ(static_cast<int64_t>(tensor.size()), num_joint_actions());
  }
}

double JointDistribution::Gini() const { return GiniImpurity(probs); }

std::vector<double> JointDistribution::Marginal(const NormalFormGame& game,
                                                int player) const {
  JEQ_CHECK_EQ(static_cast<int64_t>(probs.size()), game.num_joint_actions());
  std::vector<double> out(game.actions_per_player[player], 0.0);
  const auto strides = game.Strides();
  for (int64_t j = 0; j < static_cast<int64_t>(probs.size()); ++j) {
    const int a = static_cast<int>((j / strides[player]) %
                                   game.actions_per_player[player]);
    out[a] += probs[j];
  }
  return out;
}

JointDistribution ClampAndNormalize(std::vector<double> raw, double tol) {
  double sum = 0.0;
  for (double& v : raw) {
    JEQ_CHECK_GE(v, -tol);
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  JEQ_CHECK_GT(sum, 0.0);
  for (double& v : raw) v /= sum;
  return JointDistribution{std::move(raw)};
}

double GiniImpurity(const std::vector<double>& probs) {
  double sq = 0.0;
  for (double p : probs) sq += p * p;
  return 1.0 - sq;
}

namespace {

// Walks all joint actions with a fixed action for `player`, i.e. over
// opponent profiles. `base` enumerates opponents row-major.
class OpponentIterator {
 public:
  OpponentIterator(const NormalFormGame& game, int player)
      : game_(game), player_(player), strides_(game.Strides()) {
    count_ = 1;
    for (int q = 0; q < game.num_players(); ++q) {
      if (q != player_) count_ *= game.actions_per_player[q];
    }
  }

  int64_t count() const { return count_; }

  // Flat joint index of the k-th opponent profile combined with own action a.
  int64_t Flat(int64_t k, int own_action) const {
    int64_t flat = 0;
    int64_t rem = k;
    for (int q = game_.num_players() - 1; q >= 0; --q) {
      if (q == player_) continue;
      const int aq = static_cast<int>(rem % game_.actions_per_player[q]);
      rem /= game_.actions_per_player[q];
      flat += aq * strides_[q];
    }
    flat += static_cast<int64_t>(own_action) * strides_[player_];
    return flat;
  }

 private:
  const NormalFormGame& game_;
  int player_;
  std::vector<int64_t> strides_;
  int64_t count_;
};

}  // namespace

ConstraintSystem BuildCeConstraints(const NormalFormGame& game,
                                    double epsilon) {
  game.Validate();
  ConstraintSystem cs;
  cs.kind = DeviationKind::kCe;
  SparseBuilder builder(game.num_joint_actions());
  for (int p = 0; p < game.num_players(); ++p) {
    OpponentIterator opp(game, p);
    const auto& gp = game.payoffs[p];
    for (int rec = 0; rec < game.actions_per_player[p]; ++rec) {
      for (int dev = 0; dev < game.actions_per_player[p]; ++dev) {
        if (dev == rec) continue;
        // Entries live only on joint actions whose p-component equals `rec`,
        // so each row touches a 1/|A_p| fraction of the columns. Flat
        // indices are visited in increasing order because opponents
        // enumerate row-major with p's coordinate fixed.
        std::vector<std::pair<int64_t, double>> entries;
        entries.reserve(opp.count());
        for (int64_t k = 0; k < opp.count(); ++k) {
          const int64_t at = opp.Flat(k, rec);
          const double gain = gp[opp.Flat(k, dev)] - gp[at];
          if (gain != 0.0) entries.emplace_back(at, gain);
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& [c, v] : entries) builder.Add(c, v);
        builder.FinishRow();
        cs.row_index.push_back(DeviationTag{p, rec, dev});
      }
    }
  }
  cs.rows = builder.Take();
  cs.epsilon.assign(cs.num_rows(), epsilon);
  return cs;
}

ConstraintSystem BuildCceConstraints(const NormalFormGame& game,
                                     double epsilon) {
  game.Validate();
  ConstraintSystem cs;
  cs.kind = DeviationKind::kCce;
  SparseBuilder builder(game.num_joint_actions());
  for (int p = 0; p < game.num_players(); ++p) {
    OpponentIterator opp(game, p);
    const auto& gp = game.payoffs[p];
    for (int dev = 0; dev < game.actions_per_player[p]; ++dev) {
      std::vector<std::pair<int64_t, double>> entries;
      for (int own = 0; own < game.actions_per_player[p]; ++own) {
        if (own == dev) continue;  // gain is identically zero there
        for (int64_t k = 0; k < opp.count(); ++k) {
          const int64_t at = opp.Flat(k, own);
          const double gain = gp[opp.Flat(k, dev)] - gp[at];
          if (gain != 0.0) entries.emplace_back(at, gain);
        }
      }
      std::sort(entries.begin(), entries.end());
      for (const auto& [c, v] : entries) builder.Add(c, v);
      builder.FinishRow();
      cs.row_index.push_back(DeviationTag{p, -1, dev});
    }
  }
  cs.rows = builder.Take();
  cs.epsilon.assign(cs.num_rows(), epsilon);
  return cs;
}

double ConstraintViolation(const ConstraintSystem& cs,
                           const std::vector<double>& sigma) {
  JEQ_CHECK_EQ(static_cast<int64_t>(sigma.size()), cs.num_joint_actions());
  if (cs.num_rows() == 0) return -std::numeric_limits<double>::infinity();
  std::vector<double> as(cs.num_rows());
  Multiply(cs.rows, sigma.data(), as.data());
  double worst = -std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    worst = std::max(worst, as[i] - cs.epsilon[i]);
  }
  return worst;
}

NormalizedSystem NormalizeRows(const ConstraintSystem& cs) {
  NormalizedSystem out;
  out.system.kind = cs.kind;
  const std::vector<double> norms = RowL2Norms(cs.rows);
  SparseBuilder builder(cs.num_joint_actions());
  for (int64_t i = 0; i < cs.num_rows(); ++i) {
    if (norms[i] == 0.0) {
      ++out.dropped_rows;
      continue;
    }
    const double inv = 1.0 / norms[i];
    for (int64_t k = cs.rows.row_start[i]; k < cs.rows.row_start[i + 1]; ++k) {
      builder.Add(cs.rows.col[k], cs.rows.val[k] * inv);
    }
    builder.FinishRow();
    out.system.epsilon.push_back(cs.epsilon[i] * inv);
    out.system.row_index.push_back(cs.row_index[i]);
    out.kept_rows.push_back(i);
    out.row_scale.push_back(norms[i]);
  }
  out.system.rows = builder.Take();
  if (out.dropped_rows > 0) {
    LogInfo("normalize_rows dropped ", out.dropped_rows,
            " zero rows (repeated actions)");
  }
  return out;
}

ReducedGame EliminateRepeatedActions(const NormalFormGame& game) {
  game.Validate();
  ReducedGame out;
  out.map.original_to_reduced.resize(game.num_players());
  out.map.repeat_counts.resize(game.num_players());

  // Group each player's actions by exact payoff-slice equality (all players'
  // tensors, all opponent profiles).
  std::vector<std::vector<int>> representatives(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    OpponentIterator opp(game, p);
    auto& o2r = out.map.original_to_reduced[p];
    o2r.assign(game.actions_per_player[p], -1);
    for (int a = 0; a < game.actions_per_player[p]; ++a) {
      bool matched = false;
      for (size_t g = 0; g < representatives[p].size() && !matched; ++g) {
        const int rep = representatives[p][g];
        bool equal = true;
        for (int q = 0; q < game.num_players() && equal; ++q) {
          for (int64_t k = 0; k < opp.count() && equal; ++k) {
            equal = game.payoffs[q][opp.Flat(k, a)] ==
                    game.payoffs[q][opp.Flat(k, rep)];
          }
        }
        if (equal) {
          o2r[a] = static_cast<int>(g);
          out.map.repeat_counts[p][g]++;
          matched = true;
        }
      }
      if (!matched) {
        o2r[a] = static_cast<int>(representatives[p].size());
        representatives[p].push_back(a);
        out.map.repeat_counts[p].push_back(1);
      }
    }
  }

  NormalFormGame& reduced = out.game;
  reduced.actions_per_player.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    reduced.actions_per_player[p] = static_cast<int>(representatives[p].size());
  }
  reduced.payoffs.assign(game.num_players(),
                         std::vector<double>(reduced.num_joint_actions()));
  for (int64_t j = 0; j < reduced.num_joint_actions(); ++j) {
    std::vector<int> ra = reduced.UnflattenIndex(j);
    std::vector<int> oa(game.num_players());
    for (int p = 0; p < game.num_players(); ++p) oa[p] = representatives[p][ra[p]];
    const int64_t oj = game.FlatIndex(oa);
    for (int p = 0; p < game.num_players(); ++p) {
      reduced.payoffs[p][j] = game.payoffs[p][oj];
    }
  }
  return out;
}

JointDistribution ExpandDistribution(const NormalFormGame& original,
                                     const NormalFormGame& reduced,
                                     const ReductionMap& map,
                                     const std::vector<double>& reduced_probs) {
  JEQ_CHECK_EQ(static_cast<int64_t>(reduced_probs.size()),
               reduced.num_joint_actions());
  std::vector<double> out(original.num_joint_actions());
  for (int64_t j = 0; j < original.num_joint_actions(); ++j) {
    std::vector<int> oa = original.UnflattenIndex(j);
    std::vector<int> ra(original.num_players());
    for (int p = 0; p < original.num_players(); ++p) {
      ra[p] = map.original_to_reduced[p][oa[p]];
    }
    out[j] = reduced_probs[reduced.FlatIndex(ra)];
  }
  return ClampAndNormalize(std::move(out));
}

DominanceReduction EliminateDominatedActions(const NormalFormGame& game) {
  game.Validate();
  DominanceReduction out;
  out.kept_actions.resize(game.num_players());
  std::vector<std::vector<bool>> alive(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    alive[p].assign(game.actions_per_player[p], true);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < game.num_players(); ++p) {
      OpponentIterator opp(game, p);
      for (int a = 0; a < game.actions_per_player[p]; ++a) {
        if (!alive[p][a]) continue;
        for (int d = 0; d < game.actions_per_player[p]; ++d) {
          if (d == a || !alive[p][d]) continue;
          // d strictly dominates a over all live opponent profiles.
          bool dominates = true;
          for (int64_t k = 0; k < opp.count() && dominates; ++k) {
            const std::vector<int> prof =
                game.UnflattenIndex(opp.Flat(k, a));
            bool live_profile = true;
            for (int q = 0; q < game.num_players(); ++q) {
              if (q != p && !alive[q][prof[q]]) live_profile = false;
            }
            if (!live_profile) continue;
            dominates = game.payoffs[p][opp.Flat(k, d)] >
                        game.payoffs[p][opp.Flat(k, a)];
          }
          if (dominates) {
            alive[p][a] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }

  NormalFormGame& reduced = out.game;
  reduced.actions_per_player.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    for (int a = 0; a < game.actions_per_player[p]; ++a) {
      if (alive[p][a]) out.kept_actions[p].push_back(a);
    }
    JEQ_CHECK_GE(out.kept_actions[p].size(), 1u);
    reduced.actions_per_player[p] = static_cast<int>(out.kept_actions[p].size());
  }
  reduced.payoffs.assign(game.num_players(),
                         std::vector<double>(reduced.num_joint_actions()));
  for (int64_t j = 0; j < reduced.num_joint_actions(); ++j) {
    std::vector<int> ra = reduced.UnflattenIndex(j);
    std::vector<int> oa(game.num_players());
    for (int p = 0; p < game.num_players(); ++p) oa[p] = out.kept_actions[p][ra[p]];
    const int64_t oj = game.FlatIndex(oa);
    for (int p = 0; p < game.num_players(); ++p) {
      reduced.payoffs[p][j] = game.payoffs[p][oj];
    }
  }
  return out;
}

std::vector<double> WelfareVector(const NormalFormGame& game) {
  std::vector<double> w(game.num_joint_actions(), 0.0);
  for (int p = 0; p < game.num_players(); ++p) {
    for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
      w[j] += game.payoffs[p][j];
    }
  }
  return w;
}

std::vector<double> ExpectedValues(const NormalFormGame& game,
                                   const JointDistribution& dist) {
  JEQ_CHECK_EQ(static_cast<int64_t>(dist.probs.size()),
               game.num_joint_actions());
  std::vector<double> values(game.num_players(), 0.0);
  for (int p = 0; p < game.num_players(); ++p) {
    double acc = 0.0;
    for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
      acc += game.payoffs[p][j] * dist.probs[j];
    }
    values[p] = acc;
  }
  return values;
}

namespace {

std::string ExpectField(std::istream& in, const std::string& name) {
  std::string label;
  in >> label;
  if (label != name + ":") {
    FatalError("game file: expected field '" + name + ":', got '" + label + "'");
  }
  return label;
}

}  // namespace

NormalFormGame ParseGameText(std::istream& in) {
  NormalFormGame game;
  ExpectField(in, "num_players");
  int num_players = 0;
  if (!(in >> num_players) || num_players < 1) {
    FatalError("game file: invalid num_players");
  }
  ExpectField(in, "actions_per_player");
  game.actions_per_player.resize(num_players);
  for (int p = 0; p < num_players; ++p) {
    if (!(in >> game.actions_per_player[p]) || game.actions_per_player[p] < 1) {
      FatalError("game file: invalid actions_per_player entry");
    }
  }
  ExpectField(in, "payoffs");
  const int64_t per_player = game.num_joint_actions();
  game.payoffs.assign(num_players, std::vector<double>(per_player));
  for (int p = 0; p < num_players; ++p) {
    for (int64_t j = 0; j < per_player; ++j) {
      if (!(in >> game.payoffs[p][j])) {
        FatalError("game file: payoff list shorter than num_players * prod(actions)");
      }
    }
  }
  double extra;
  if (in >> extra) FatalError("game file: trailing payoff values");
  game.Validate();
  return game;
}

NormalFormGame LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) FatalError("cannot open game file: " + path);
  return ParseGameText(in);
}

void WriteGameFile(const NormalFormGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) FatalError("cannot write game file: " + path);
  out << "num_players: " << game.num_players() << "\n";
  out << "actions_per_player:";
  for (int a : game.actions_per_player) out << " " << a;
  out << "\npayoffs:";
  char buf[64];
  for (const auto& tensor : game.payoffs) {
    for (double v : tensor) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << " " << buf;
    }
  }
  out << "\n";
}

NormalFormGame TrafficLightsGame() {
  // Two drivers choosing Go/Wait. Crashing is bad for both, going while the
  // other waits is mildly pleasant.
  NormalFormGame game;
  game.actions_per_player = {2, 2};
  game.payoffs = {{-10.0, 1.0, 0.0, 0.0}, {-10.0, 0.0, 1.0, 0.0}};
  return game;
}

NormalFormGame MatchingPenniesGame() {
  NormalFormGame game;
  game.actions_per_player = {2, 2};
  game.payoffs = {{1.0, -1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0, -1.0}};
  return game;
}

NormalFormGame PrisonersDilemmaGame() {
  NormalFormGame game;
  game.actions_per_player = {2, 2};
  // Action 0 = cooperate, 1 = defect.
  game.payoffs = {{3.0, 0.0, 5.0, 1.0}, {3.0, 5.0, 0.0, 1.0}};
  return game;
}

}  // namespace jointeq
