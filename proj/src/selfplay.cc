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

#include "goexploit/selfplay.h"

#include <algorithm>
#include <bit>

namespace goexploit {
namespace {

// Redraw budget for branch modes that can land on terminal states.
constexpr int kBranchAttempts = 16;
constexpr int kInitRestarts = 100;

Action SampleFromMaskedPrior(const Game& game, const GameState& state,
                             const Evaluation& eval, Rng& rng) {
  uint64_t mask = game.LegalActionMask(state);
  std::vector<double> weights(game.num_actions(), 0.0);
  double sum = 0.0;
  for (uint64_t m = mask; m; m &= m - 1) {
    const int a = std::countr_zero(m);
    weights[a] = std::max(0.0, eval.policy[a]);
    sum += weights[a];
  }
  if (!(sum > 0.0)) {
    for (uint64_t m = mask; m; m &= m - 1) weights[std::countr_zero(m)] = 1.0;
  }
  return SampleAction(weights, rng);
}

}  // namespace

std::string_view OriginName(TrajectoryOrigin origin) {
  switch (origin) {
    case TrajectoryOrigin::kInitialState:
      return "initial_state";
    case TrajectoryOrigin::kArchive:
      return "archive";
    case TrajectoryOrigin::kKataGoInit:
      return "katago_init";
    case TrajectoryOrigin::kBranch:
      return "branch";
  }
  return "unknown";
}

void SelfplayConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("selfplay.lambda: must be in [0, 1], got " +
                      std::to_string(lambda));
  }
  if (k < 0) throw ConfigError("selfplay.k: must be >= 0");
  search.Validate();
  if (katago_init) {
    if (katago_init->min_moves < 0 ||
        katago_init->max_moves < katago_init->min_moves) {
      throw ConfigError(
          "selfplay.katago_init: need 0 <= min_moves <= max_moves");
    }
  }
  if (branching) {
    const BranchingConfig& b = *branching;
    if (!(b.p_branch_alt >= 0.0 && b.p_branch_value >= 0.0 &&
          b.p_branch_alt + b.p_branch_value <= 1.0)) {
      throw ConfigError(
          "selfplay.branching: probabilities must be >= 0 and sum to <= 1");
    }
    if (b.branch_window < 1) {
      throw ConfigError("selfplay.branching.branch_window: must be >= 1");
    }
    if (b.n_sampled_actions < 1) {
      throw ConfigError("selfplay.branching.n_sampled_actions: must be >= 1");
    }
  }
}

std::vector<TrainingSample> Trajectory::ToSamples(const Game& game) const {
  std::vector<TrainingSample> samples;
  samples.reserve(steps.size());
  for (const TrajectoryStep& step : steps) {
    TrainingSample s;
    s.features = Encode(game, step.state).planes;
    s.policy_target = step.policy;
    s.value_target = outcome.ForPlayer(step.state.to_move);
    s.has_policy_target = step.has_policy_target;
    s.trajectory_id = id;
    samples.push_back(std::move(s));
  }
  return samples;
}

std::string Trajectory::Validate(const Game& game) const {
  if (steps.empty()) return "trajectory has no steps";
  if (!(steps.front().state == start_state)) {
    return "first step is not the start state";
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    const TrajectoryStep& step = steps[i];
    if (game.IsTerminal(step.state)) {
      return "step " + std::to_string(i) + " is terminal";
    }
    if (!game.IsLegal(step.state, step.action)) {
      return "step " + std::to_string(i) + " plays an illegal action";
    }
    GameState next = game.ApplyAction(step.state, step.action);
    if (i + 1 < steps.size()) {
      if (!(next == steps[i + 1].state)) {
        return "step " + std::to_string(i + 1) + " does not follow";
      }
    } else {
      auto result = game.TerminalOutcome(next);
      if (!result) return "trajectory does not end in a terminal state";
      if (!(*result == outcome)) return "recorded outcome is wrong";
    }
  }
  return "";
}

StartState SelectStartState(const Game& game, const Archive& archive,
                            double lambda, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < lambda) {
    return {game.InitialState(), TrajectoryOrigin::kInitialState};
  }
  return {archive.Sample(rng), TrajectoryOrigin::kArchive};
}

Action ArgmaxAction(std::span<const int> visits) {
  GX_REQUIRE(!visits.empty(), "no visits");
  return static_cast<Action>(std::max_element(visits.begin(), visits.end()) -
                             visits.begin());
}

Action SampleAction(std::span<const double> policy, Rng& rng) {
  std::discrete_distribution<int> dist(policy.begin(), policy.end());
  return dist(rng);
}

Trajectory GenerateTrajectory(const Game& game, const GameState& start,
                              const Evaluator& evaluator,
                              const SelfplayConfig& cfg, Rng& rng,
                              TrajectoryOrigin origin, uint64_t id) {
  GX_REQUIRE(!game.IsTerminal(start), "start state is terminal");
  Trajectory traj;
  traj.start_state = start;
  traj.origin = origin;
  traj.id = id;
  Search search(game, evaluator);
  GameState s = start;
  for (int t = 0; !game.IsTerminal(s); ++t) {
    SearchResult r = search.Run(s, cfg.search, rng);
    const Action a = t < cfg.k ? SampleAction(r.policy, rng)
                               : ArgmaxAction(r.root_visits);
    traj.steps.push_back({s, std::move(r.policy), r.full_search, a});
    s = game.ApplyAction(s, a);
  }
  traj.outcome = *game.TerminalOutcome(s);
  return traj;
}

std::vector<GameState> PlayArchiveMatch(const Game& game,
                                        const Evaluator& evaluator,
                                        const SelfplayConfig& cfg, Rng& rng) {
  // Archive actors always run full searches.
  SearchConfig search_cfg = cfg.search;
  search_cfg.playout_cap.reset();
  Search search(game, evaluator);
  std::vector<GameState> found;
  GameState s = game.InitialState();
  for (int t = 0; !game.IsTerminal(s); ++t) {
    SearchResult r = search.Run(s, search_cfg, rng);
    const Action a = t < cfg.k ? SampleAction(r.policy, rng)
                               : ArgmaxAction(r.root_visits);
    found.insert(found.end(), r.search_states.begin(), r.search_states.end());
    s = game.ApplyAction(s, a);
  }
  return found;
}

GameState KataGoInitStart(const Game& game, const Evaluator& evaluator,
                          const KataGoInitConfig& cfg, Rng& rng) {
  std::uniform_int_distribution<int> moves(cfg.min_moves, cfg.max_moves);
  const int m = moves(rng);
  for (int attempt = 0; attempt < kInitRestarts; ++attempt) {
    GameState s = game.InitialState();
    int played = 0;
    while (played < m && !game.IsTerminal(s)) {
      s = game.ApplyAction(
          s, SampleFromMaskedPrior(game, s, evaluator.Evaluate(s), rng));
      ++played;
    }
    if (!game.IsTerminal(s)) return s;
  }
  return game.InitialState();
}

std::optional<GameState> BranchAlternative(const Game& game,
                                           const Trajectory& source,
                                           Rng& rng) {
  if (source.steps.empty()) return std::nullopt;
  std::uniform_int_distribution<size_t> pick_step(0, source.steps.size() - 1);
  for (int attempt = 0; attempt < kBranchAttempts; ++attempt) {
    const TrajectoryStep& step = source.steps[pick_step(rng)];
    std::vector<Action> alternatives;
    for (Action a : game.LegalActions(step.state)) {
      if (a != step.action) alternatives.push_back(a);
    }
    if (alternatives.empty()) continue;
    std::uniform_int_distribution<size_t> pick(0, alternatives.size() - 1);
    GameState next = game.ApplyAction(step.state, alternatives[pick(rng)]);
    if (!game.IsTerminal(next)) return next;
  }
  return std::nullopt;
}

std::optional<GameState> BranchByValue(const Game& game,
                                       const Trajectory& source,
                                       const Evaluator& evaluator,
                                       const BranchingConfig& cfg, Rng& rng) {
  if (source.steps.empty()) return std::nullopt;
  const size_t window =
      std::min(source.steps.size(), static_cast<size_t>(cfg.branch_window));
  std::uniform_int_distribution<size_t> pick_step(0, window - 1);
  for (int attempt = 0; attempt < kBranchAttempts; ++attempt) {
    const TrajectoryStep& step = source.steps[pick_step(rng)];
    std::vector<Action> actions = game.LegalActions(step.state);
    std::shuffle(actions.begin(), actions.end(), rng);
    actions.resize(std::min(actions.size(),
                            static_cast<size_t>(cfg.n_sampled_actions)));
    std::optional<GameState> best;
    double best_value = 0.0;
    for (Action a : actions) {
      GameState next = game.ApplyAction(step.state, a);
      if (game.IsTerminal(next)) continue;
      // The successor's value is for its mover; negate for the brancher.
      const double value = -evaluator.Evaluate(next).value;
      if (!best || value > best_value) {
        best = next;
        best_value = value;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::optional<GameState> KataGoBranch(const Game& game,
                                      const Trajectory& source,
                                      const Evaluator& evaluator,
                                      const BranchingConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (r < cfg.p_branch_alt) return BranchAlternative(game, source, rng);
  if (r < cfg.p_branch_alt + cfg.p_branch_value) {
    return BranchByValue(game, source, evaluator, cfg, rng);
  }
  return std::nullopt;
}

TrainingActor::TrainingActor(const Game& game, const SelfplayConfig& cfg,
                             const Archive* archive,
                             const ParamsSource& params, uint64_t seed,
                             uint64_t id_base, uint64_t id_stride)
    : game_(game),
      cfg_(cfg),
      archive_(archive),
      params_(params),
      rng_(seed),
      next_id_(id_base),
      id_stride_(id_stride) {}

StartState TrainingActor::ChooseStart(const Evaluator& evaluator) {
  if (cfg_.branching && previous_) {
    if (auto s = KataGoBranch(game_, *previous_, evaluator, *cfg_.branching,
                              rng_)) {
      return {*s, TrajectoryOrigin::kBranch};
    }
  }
  StartState start{game_.InitialState(), TrajectoryOrigin::kInitialState};
  if (archive_ != nullptr) {
    start = SelectStartState(game_, *archive_, cfg_.lambda, rng_);
  }
  if (start.origin == TrajectoryOrigin::kInitialState && cfg_.katago_init) {
    start = {KataGoInitStart(game_, evaluator, *cfg_.katago_init, rng_),
             TrajectoryOrigin::kKataGoInit};
  }
  return start;
}

Trajectory TrainingActor::Next() {
  NetworkEvaluator evaluator(params_.Latest());
  StartState start = ChooseStart(evaluator);
  Trajectory traj = GenerateTrajectory(game_, start.state, evaluator, cfg_,
                                       rng_, start.origin, next_id_);
  next_id_ += id_stride_;
  ++produced_;
  if (cfg_.branching) previous_ = traj;
  return traj;
}

ArchiveActor::ArchiveActor(const Game& game, const SelfplayConfig& cfg,
                           Archive& archive, const ParamsSource& params,
                           uint64_t seed)
    : game_(game), cfg_(cfg), archive_(archive), params_(params), rng_(seed) {}

size_t ArchiveActor::PlayOneMatch() {
  NetworkEvaluator evaluator(params_.Latest());
  std::vector<GameState> found =
      PlayArchiveMatch(game_, evaluator, cfg_, rng_);
  archive_.Update(found, ArchiveWriter::kArchiveActor);
  ++matches_;
  return found.size();
}

}  // namespace goexploit
