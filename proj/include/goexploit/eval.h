// Copyright 2026 The goexploit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOEXPLOIT_EVAL_H_
#define GOEXPLOIT_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "goexploit/game.h"
#include "goexploit/mcts.h"
#include "goexploit/model.h"
#include "goexploit/selfplay.h"
#include "goexploit/solver.h"

namespace goexploit {

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action SelectAction(const GameState& state, Rng& rng) = 0;
};

// Evaluation-time search: no root noise, most-visited action from move 0.
class SearchAgent final : public Agent {
 public:
  SearchAgent(const Game& game, std::shared_ptr<const Evaluator> evaluator,
              int iterations, double c_puct = 1.0);
  Action SelectAction(const GameState& state, Rng& rng) override;

 private:
  const Game& game_;
  std::shared_ptr<const Evaluator> evaluator_;
  SearchConfig cfg_;
};

class SolverAgent final : public Agent {
 public:
  SolverAgent(const Game& game, int level, int base_iterations)
      : opponent_(game, level, base_iterations) {}
  Action SelectAction(const GameState& state, Rng& rng) override {
    return opponent_.SelectAction(state, rng);
  }

 private:
  ReferenceOpponent opponent_;
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(const Game& game) : game_(game) {}
  Action SelectAction(const GameState& state, Rng& rng) override;

 private:
  const Game& game_;
};

struct MatchResult {
  double score_p1 = 0.0;  // 1 win, 0.5 draw, 0 loss for player 1
  int moves = 0;
  int seat_a = 1;  // the seat agent A played

  double score_a() const { return seat_a == 1 ? score_p1 : 1.0 - score_p1; }
};

// A full game from the initial state; `player1` moves first.
MatchResult PlayMatch(const Game& game, Agent& player1, Agent& player2,
                      Rng& rng);
// Agent A plays `seat_a`.
MatchResult PlaySeated(const Game& game, Agent& a, Agent& b, int seat_a,
                       Rng& rng);

struct LevelResult {
  int level = 0;
  int matches = 0;
  int wins = 0;
  int draws = 0;
  int losses = 0;

  // (wins + 0.5 draws) / matches.
  double win_rate() const {
    return matches == 0 ? 0.0 : (wins + 0.5 * draws) / matches;
  }
};

// n_matches per level against ReferenceOpponent(level, base_iterations),
// half in each seat (n_matches must be even). Each match has its own seed
// derived from (seed, level, index), so results do not depend on order.
std::vector<LevelResult> EvaluateAgent(const Game& game, Agent& agent,
                                       std::span<const int> levels,
                                       int n_matches, int base_iterations,
                                       uint64_t seed);

// Loads the checkpoint and evaluates a SearchAgent with `iterations` search
// iterations, which is also the solver's base budget.
std::vector<LevelResult> EvaluateCheckpoint(const std::string& checkpoint,
                                            std::span<const int> levels,
                                            int n_matches, int iterations,
                                            uint64_t seed);

// One evaluated point: a checkpoint's mean score at some learning step.
struct EvalPoint {
  int step = 0;
  int level = 0;
  int matches = 0;
  double win_rate = 0.0;
};

// Windowed win rate for steps 1..total_steps: the match-weighted mean over
// points with step in (t - window, t]. An empty window repeats the previous
// value (0 before any point).
std::vector<double> WindowedCurve(std::span<const EvalPoint> points,
                                  int level, int total_steps, int window = 50);

// Sum over steps.
double ComputeAuc(std::span<const double> curve);

struct TournamentResult {
  int games = 0;
  double win_rate_a = 0.0;
};

// Every pairing of A and B plays twice, once per seat.
TournamentResult Tournament(const Game& game,
                            std::span<const std::shared_ptr<Agent>> side_a,
                            std::span<const std::shared_ptr<Agent>> side_b,
                            uint64_t seed);
TournamentResult TournamentFromCheckpoints(
    const std::vector<std::string>& side_a,
    const std::vector<std::string>& side_b, int iterations, uint64_t seed);

// Distinct state keys per depth (ply) across a trajectory log, optionally
// only for trajectories consumed by learning steps <= max_step (0 = all).
// Throws IoError on a malformed record.
std::vector<size_t> UniqueStatesByDepth(std::istream& log, int max_step = 0);
std::vector<size_t> UniqueStatesByDepthFile(const std::string& path,
                                            int max_step = 0);

struct ValueLossReport {
  std::string mode;  // "visited" or "search"
  double mse = 0.0;
  size_t n_states = 0;
};

// Plays n_games self-play games from the initial state with `play` (noise and
// k-move sampling as configured) and compares the evaluator's value at each
// visited state with the game's outcome for that state's mover.
ValueLossReport VisitedValueLoss(const Game& game, const Evaluator& evaluator,
                                 const SelfplayConfig& play, int n_games,
                                 uint64_t seed);

// Same games; for every state expanded by their searches (at most
// max_states, evenly strided, 0 = all) plays a noise-free most-visited
// continuation for both sides and compares the value with its outcome.
ValueLossReport SearchValueLoss(const Game& game, const Evaluator& evaluator,
                                const SelfplayConfig& play, int n_games,
                                size_t max_states, uint64_t seed);

struct MeanCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// mean +- 1.96 * s / sqrt(n) with the n - 1 sample deviation; one value
// gives a zero-width interval.
MeanCi NormalCi(std::span<const double> values);

// Reads <run>/eval.csv and <run>/manifest.json for each run and writes
//   curves.csv  step,level,mean_win_rate,ci95_low,ci95_high
//   auc.csv     level,mean_auc,ci95_low,ci95_high,runs
// into out_dir. Throws IoError naming any missing input.
void EmitCurves(const std::vector<std::string>& run_dirs,
                const std::string& out_dir, int window = 50);

struct RunSummary {
  int steps = 0;
  uint64_t trajectories = 0;
  double trajectories_per_step = 0.0;
  std::vector<size_t> unique_by_depth;
  // Distinct states at depths > the run's k.
  size_t unique_beyond_k = 0;
};

// From <run>/manifest.json, metrics.csv and the trajectory log.
RunSummary SummarizeRun(const std::string& run_dir);

// eval.csv rows: step,level,matches,win_rate.
std::vector<EvalPoint> ReadEvalCsv(const std::string& path);
void WriteEvalCsv(const std::string& path, std::span<const EvalPoint> points);

}  // namespace goexploit

#endif  // GOEXPLOIT_EVAL_H_
