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

#include "goexploit/eval.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "goexploit/learner.h"
#include "json.hpp"

namespace goexploit {
namespace {

namespace fs = std::filesystem;

SearchConfig QuietSearch(const SearchConfig& base) {
  SearchConfig cfg = base;
  cfg.use_root_noise = false;
  cfg.playout_cap.reset();
  cfg.forced_playouts.reset();
  return cfg;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

SearchAgent::SearchAgent(const Game& game,
                         std::shared_ptr<const Evaluator> evaluator,
                         int iterations, double c_puct)
    : game_(game), evaluator_(std::move(evaluator)) {
  cfg_.iterations = iterations;
  cfg_.c_puct = c_puct;
  cfg_.use_root_noise = false;
  cfg_.Validate();
}

Action SearchAgent::SelectAction(const GameState& state, Rng& rng) {
  Search search(game_, *evaluator_);
  return search.RunWithBudget(state, cfg_, cfg_.iterations, true, rng)
      .best_action;
}

Action RandomAgent::SelectAction(const GameState& state, Rng& rng) {
  const std::vector<Action> legal = game_.LegalActions(state);
  std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
  return legal[pick(rng)];
}

MatchResult PlayMatch(const Game& game, Agent& player1, Agent& player2,
                      Rng& rng) {
  MatchResult result;
  GameState s = game.InitialState();
  while (true) {
    if (auto outcome = game.TerminalOutcome(s)) {
      result.score_p1 = 0.5 * (outcome->value + 1);
      return result;
    }
    Agent& mover = s.to_move == 1 ? player1 : player2;
    s = game.ApplyAction(s, mover.SelectAction(s, rng));
    ++result.moves;
  }
}

MatchResult PlaySeated(const Game& game, Agent& a, Agent& b, int seat_a,
                       Rng& rng) {
  GX_REQUIRE(seat_a == 1 || seat_a == 2, "seat must be 1 or 2");
  MatchResult r =
      seat_a == 1 ? PlayMatch(game, a, b, rng) : PlayMatch(game, b, a, rng);
  r.seat_a = seat_a;
  return r;
}

std::vector<LevelResult> EvaluateAgent(const Game& game, Agent& agent,
                                       std::span<const int> levels,
                                       int n_matches, int base_iterations,
                                       uint64_t seed) {
  if (n_matches < 0 || n_matches % 2 != 0) {
    throw ConfigError("matches: must be even and >= 0, got " +
                      std::to_string(n_matches));
  }
  std::vector<LevelResult> out;
  if (n_matches == 0) return out;
  for (int level : levels) {
    SolverAgent solver(game, level, base_iterations);
    LevelResult lr;
    lr.level = level;
    const uint64_t level_seed = DeriveSeed(seed, static_cast<uint64_t>(level));
    for (int i = 0; i < n_matches; ++i) {
      Rng rng(DeriveSeed(level_seed, i));
      const MatchResult m = PlaySeated(game, agent, solver, i % 2 + 1, rng);
      const double score = m.score_a();
      ++lr.matches;
      if (score == 1.0) {
        ++lr.wins;
      } else if (score == 0.5) {
        ++lr.draws;
      } else {
        ++lr.losses;
      }
    }
    out.push_back(lr);
  }
  return out;
}

std::vector<LevelResult> EvaluateCheckpoint(const std::string& checkpoint,
                                            std::span<const int> levels,
                                            int n_matches, int iterations,
                                            uint64_t seed) {
  auto net = std::make_shared<const Network>(Network::Load(checkpoint));
  SearchAgent agent(net->game(), std::make_shared<NetworkEvaluator>(net),
                    iterations);
  return EvaluateAgent(net->game(), agent, levels, n_matches, iterations,
                       seed);
}

std::vector<double> WindowedCurve(std::span<const EvalPoint> points, int level,
                                  int total_steps, int window) {
  GX_REQUIRE(window >= 1, "window must be >= 1");
  std::vector<double> curve(std::max(total_steps, 0), 0.0);
  double previous = 0.0;
  for (int t = 1; t <= total_steps; ++t) {
    double score = 0.0;
    int matches = 0;
    for (const EvalPoint& p : points) {
      if (p.level != level || p.step <= t - window || p.step > t) continue;
      score += p.win_rate * p.matches;
      matches += p.matches;
    }
    if (matches > 0) previous = score / matches;
    curve[t - 1] = previous;
  }
  return curve;
}

double ComputeAuc(std::span<const double> curve) {
  double sum = 0.0;
  for (double v : curve) sum += v;
  return sum;
}

TournamentResult Tournament(const Game& game,
                            std::span<const std::shared_ptr<Agent>> side_a,
                            std::span<const std::shared_ptr<Agent>> side_b,
                            uint64_t seed) {
  TournamentResult result;
  double score = 0.0;
  uint64_t match = 0;
  for (const auto& a : side_a) {
    for (const auto& b : side_b) {
      for (int seat = 1; seat <= 2; ++seat) {
        Rng rng(DeriveSeed(seed, match++));
        score += PlaySeated(game, *a, *b, seat, rng).score_a();
        ++result.games;
      }
    }
  }
  result.win_rate_a = result.games > 0 ? score / result.games : 0.0;
  return result;
}

TournamentResult TournamentFromCheckpoints(
    const std::vector<std::string>& side_a,
    const std::vector<std::string>& side_b, int iterations, uint64_t seed) {
  if (side_a.empty() || side_b.empty()) {
    throw ConfigError("tournament: both sides need at least one checkpoint");
  }
  std::vector<std::shared_ptr<Agent>> a;
  std::vector<std::shared_ptr<Agent>> b;
  std::optional<GameId> game;
  auto load = [&](const std::string& path) {
    auto net = std::make_shared<const Network>(Network::Load(path));
    if (game && *game != net->shape().game) {
      throw ConfigError("tournament: checkpoints are for different games");
    }
    game = net->shape().game;
    return std::make_shared<SearchAgent>(
        net->game(), std::make_shared<NetworkEvaluator>(net), iterations);
  };
  for (const std::string& p : side_a) a.push_back(load(p));
  for (const std::string& p : side_b) b.push_back(load(p));
  return Tournament(GetGame(*game), a, b, seed);
}

std::vector<size_t> UniqueStatesByDepth(std::istream& log, int max_step) {
  std::vector<std::unordered_set<std::string>> by_depth;
  std::string line;
  int line_no = 0;
  while (std::getline(log, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("keys") ||
        !rec.contains("start_ply") || !rec["keys"].is_array() ||
        !rec["start_ply"].is_number_integer()) {
      throw IoError("trajectory log line " + std::to_string(line_no) +
                    ": malformed record");
    }
    if (max_step > 0 && rec.value("step", 0) > max_step) continue;
    const int start = rec["start_ply"].get<int>();
    const auto& keys = rec["keys"];
    for (size_t i = 0; i < keys.size(); ++i) {
      if (!keys[i].is_string()) {
        throw IoError("trajectory log line " + std::to_string(line_no) +
                      ": malformed key");
      }
      const size_t depth = start + i;
      if (by_depth.size() <= depth) by_depth.resize(depth + 1);
      by_depth[depth].insert(keys[i].get<std::string>());
    }
  }
  std::vector<size_t> counts;
  counts.reserve(by_depth.size());
  for (const auto& keys : by_depth) counts.push_back(keys.size());
  return counts;
}

std::vector<size_t> UniqueStatesByDepthFile(const std::string& path,
                                            int max_step) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  return UniqueStatesByDepth(in, max_step);
}

ValueLossReport VisitedValueLoss(const Game& game, const Evaluator& evaluator,
                                 const SelfplayConfig& play, int n_games,
                                 uint64_t seed) {
  if (n_games < 1) throw ConfigError("games: must be >= 1");
  ValueLossReport report;
  report.mode = "visited";
  double sum = 0.0;
  for (int g = 0; g < n_games; ++g) {
    Rng rng(DeriveSeed(seed, g));
    Trajectory traj =
        GenerateTrajectory(game, game.InitialState(), evaluator, play, rng);
    for (const TrajectoryStep& step : traj.steps) {
      const double z = traj.outcome.ForPlayer(step.state.to_move);
      const double err = evaluator.Evaluate(step.state).value - z;
      sum += err * err;
      ++report.n_states;
    }
  }
  report.mse = sum / report.n_states;
  return report;
}

ValueLossReport SearchValueLoss(const Game& game, const Evaluator& evaluator,
                                const SelfplayConfig& play, int n_games,
                                size_t max_states, uint64_t seed) {
  if (n_games < 1) throw ConfigError("games: must be >= 1");
  std::vector<GameState> states;
  Search search(game, evaluator);
  for (int g = 0; g < n_games; ++g) {
    Rng rng(DeriveSeed(seed, g));
    GameState s = game.InitialState();
    for (int t = 0; !game.IsTerminal(s); ++t) {
      SearchResult r = search.Run(s, play.search, rng);
      states.insert(states.end(), r.search_states.begin(),
                    r.search_states.end());
      const Action a = t < play.k ? SampleAction(r.policy, rng)
                                  : ArgmaxAction(r.root_visits);
      s = game.ApplyAction(s, a);
    }
  }
  if (states.empty()) throw ConfigError("search value loss: no search states");
  const size_t stride =
      max_states == 0 || states.size() <= max_states
          ? 1
          : (states.size() + max_states - 1) / max_states;
  const SearchConfig quiet = QuietSearch(play.search);
  ValueLossReport report;
  report.mode = "search";
  double sum = 0.0;
  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(n_games)));
  for (size_t i = 0; i < states.size(); i += stride) {
    const GameState& start = states[i];
    GameState s = start;
    while (!game.IsTerminal(s)) {
      s = game.ApplyAction(
          s, search.RunWithBudget(s, quiet, quiet.iterations, true, rng)
                 .best_action);
    }
    const double z = game.TerminalOutcome(s)->ForPlayer(start.to_move);
    const double err = evaluator.Evaluate(start).value - z;
    sum += err * err;
    ++report.n_states;
  }
  report.mse = sum / report.n_states;
  return report;
}

MeanCi NormalCi(std::span<const double> values) {
  GX_REQUIRE(!values.empty(), "no values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  if (values.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (values.size() - 1));
  const double half = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  return {mean, mean - half, mean + half};
}

std::vector<EvalPoint> ReadEvalCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != "step,level,matches,win_rate") {
    throw IoError(path + ": expected header step,level,matches,win_rate");
  }
  std::vector<EvalPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EvalPoint p;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &p.step, &p.level,
                    &p.matches, &p.win_rate) != 4) {
      throw IoError(path + ": malformed row '" + line + "'");
    }
    points.push_back(p);
  }
  return points;
}

void WriteEvalCsv(const std::string& path, std::span<const EvalPoint> points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path + ": cannot write");
  out << "step,level,matches,win_rate\n";
  for (const EvalPoint& p : points) {
    out << p.step << ',' << p.level << ',' << p.matches << ','
        << Fmt(p.win_rate) << '\n';
  }
}

void EmitCurves(const std::vector<std::string>& run_dirs,
                const std::string& out_dir, int window) {
  if (run_dirs.empty()) throw ConfigError("emit-curves: no run directories");
  struct Run {
    int total_steps = 0;
    std::vector<EvalPoint> points;
  };
  std::vector<Run> runs;
  std::set<int> levels;
  int total_steps = 0;
  for (const std::string& dir : run_dirs) {
    Run run;
    run.total_steps = ReadManifest(dir).config.total_steps;
    run.points = ReadEvalCsv((fs::path(dir) / "eval.csv").string());
    for (const EvalPoint& p : run.points) levels.insert(p.level);
    total_steps = std::max(total_steps, run.total_steps);
    runs.push_back(std::move(run));
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream curves(fs::path(out_dir) / "curves.csv", std::ios::trunc);
  std::ofstream auc(fs::path(out_dir) / "auc.csv", std::ios::trunc);
  if (!curves || !auc) throw IoError(out_dir + ": cannot write curves");
  curves << "step,level,mean_win_rate,ci95_low,ci95_high\n";
  auc << "level,mean_auc,ci95_low,ci95_high,runs\n";
  for (int level : levels) {
    std::vector<std::vector<double>> per_run;
    std::vector<double> aucs;
    for (const Run& run : runs) {
      per_run.push_back(
          WindowedCurve(run.points, level, run.total_steps, window));
      aucs.push_back(ComputeAuc(per_run.back()));
    }
    for (int t = 1; t <= total_steps; ++t) {
      std::vector<double> at;
      for (const auto& curve : per_run) {
        if (t <= static_cast<int>(curve.size())) at.push_back(curve[t - 1]);
      }
      const MeanCi ci = NormalCi(at);
      curves << t << ',' << level << ',' << Fmt(ci.mean) << ','
             << Fmt(ci.low) << ',' << Fmt(ci.high) << '\n';
    }
    const MeanCi ci = NormalCi(aucs);
    auc << level << ',' << Fmt(ci.mean) << ',' << Fmt(ci.low) << ','
        << Fmt(ci.high) << ',' << aucs.size() << '\n';
  }
}

RunSummary SummarizeRun(const std::string& run_dir) {
  const RunManifest m = ReadManifest(run_dir);
  RunSummary summary;
  const std::string metrics = (fs::path(m.run_dir) / m.metrics).string();
  std::ifstream in(metrics);
  if (!in) throw IoError(metrics + ": cannot open");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // step,loss_total,loss_value,loss_policy,samples,trajectories,...
    int step = 0;
    double lt = 0, lv = 0, lp = 0;
    unsigned long long samples = 0, trajectories = 0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%llu,%llu", &step, &lt,
                    &lv, &lp, &samples, &trajectories) != 6) {
      throw IoError(metrics + ": malformed row '" + line + "'");
    }
    ++summary.steps;
    summary.trajectories += trajectories;
  }
  if (summary.steps > 0) {
    summary.trajectories_per_step =
        static_cast<double>(summary.trajectories) / summary.steps;
  }
  if (!m.trajectory_log.empty()) {
    summary.unique_by_depth = UniqueStatesByDepthFile(
        (fs::path(m.run_dir) / m.trajectory_log).string());
    for (size_t d = m.config.selfplay.k + 1; d < summary.unique_by_depth.size();
         ++d) {
      summary.unique_beyond_k += summary.unique_by_depth[d];
    }
  }
  return summary;
}

}  // namespace goexploit
