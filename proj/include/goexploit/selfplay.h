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

#ifndef GOEXPLOIT_SELFPLAY_H_
#define GOEXPLOIT_SELFPLAY_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "goexploit/archive.h"
#include "goexploit/game.h"
#include "goexploit/mcts.h"
#include "goexploit/model.h"

namespace goexploit {

enum class TrajectoryOrigin { kInitialState, kArchive, kKataGoInit, kBranch };
std::string_view OriginName(TrajectoryOrigin origin);

struct TrajectoryStep {
  GameState state;
  std::vector<double> policy;
  bool has_policy_target = true;  // false after a reduced-budget search
  Action action = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Outcome outcome;
  GameState start_state;
  uint64_t id = 0;
  TrajectoryOrigin origin = TrajectoryOrigin::kInitialState;

  // One sample per step; z is converted to each step's side to move.
  std::vector<TrainingSample> ToSamples(const Game& game) const;
  // Checks the legality chain, the terminal end and the recorded outcome.
  // Returns an empty string when valid, else a description of the defect.
  std::string Validate(const Game& game) const;
};

// Trajectory initialization: the first m moves are sampled straight from the
// network prior, m uniform in [min_moves, max_moves].
struct KataGoInitConfig {
  int min_moves = 0;
  int max_moves = 4;
};

struct BranchingConfig {
  double p_branch_alt = 0.05;
  double p_branch_value = 0.05;
  int branch_window = 10;
  int n_sampled_actions = 4;
};

struct SelfplayConfig {
  double lambda = 1.0;  // probability of starting from the initial state
  int k = 10;           // moves (from trajectory start) with sampled actions
  SearchConfig search;
  std::optional<KataGoInitConfig> katago_init;
  std::optional<BranchingConfig> branching;

  void Validate() const;
};

struct StartState {
  GameState state;
  TrajectoryOrigin origin = TrajectoryOrigin::kInitialState;
};

// r ~ U[0,1); the initial state if r < lambda, else an archive sample.
StartState SelectStartState(const Game& game, const Archive& archive,
                            double lambda, Rng& rng);

// Index of a maximal entry, lowest index on ties.
Action ArgmaxAction(std::span<const int> visits);
Action SampleAction(std::span<const double> policy, Rng& rng);

// Plays from `start` to a terminal state. Each move searches with root noise;
// the action is sampled from the search policy for the first cfg.k moves of
// this trajectory and is the most-visited action afterwards.
Trajectory GenerateTrajectory(const Game& game, const GameState& start,
                              const Evaluator& evaluator,
                              const SelfplayConfig& cfg, Rng& rng,
                              TrajectoryOrigin origin = TrajectoryOrigin::kInitialState,
                              uint64_t id = 0);

// One archive-actor match from the initial state; returns every nonterminal
// search state seen across all of its searches, in order. Produces no
// training data.
std::vector<GameState> PlayArchiveMatch(const Game& game,
                                        const Evaluator& evaluator,
                                        const SelfplayConfig& cfg, Rng& rng);

// Samples m moves from the masked network prior starting at the initial
// state; restarts whenever a terminal state is reached.
GameState KataGoInitStart(const Game& game, const Evaluator& evaluator,
                          const KataGoInitConfig& cfg, Rng& rng);

// Branch by alternative action: a random step of `source`, a uniformly random
// legal action other than the one played there. nullopt if no nonterminal
// alternative exists after bounded redraws.
std::optional<GameState> BranchAlternative(const Game& game,
                                           const Trajectory& source, Rng& rng);
// Branch by value: a step within the first `branch_window` steps, up to
// n_sampled_actions distinct legal actions, keep the successor the network
// likes best for the branching player.
std::optional<GameState> BranchByValue(const Game& game,
                                       const Trajectory& source,
                                       const Evaluator& evaluator,
                                       const BranchingConfig& cfg, Rng& rng);
// Picks mode A with p_branch_alt, mode B with p_branch_value, or nothing.
std::optional<GameState> KataGoBranch(const Game& game,
                                      const Trajectory& source,
                                      const Evaluator& evaluator,
                                      const BranchingConfig& cfg, Rng& rng);

// Latest-wins publication of network snapshots from the learner to actors.
class ParamsSource {
 public:
  explicit ParamsSource(std::shared_ptr<const Network> initial)
      : latest_(std::move(initial)) {}
  void Publish(std::shared_ptr<const Network> net) {
    std::lock_guard<std::mutex> lock(mu_);
    latest_ = std::move(net);
    ++version_;
  }
  std::shared_ptr<const Network> Latest() const {
    std::lock_guard<std::mutex> lock(mu_);
    return latest_;
  }
  uint64_t version() const {
    std::lock_guard<std::mutex> lock(mu_);
    return version_;
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Network> latest_;
  uint64_t version_ = 0;
};

enum class Backpressure { kBlock, kDropOldest };

// Bounded multi-producer queue of whole trajectories.
template <typename T>
class BlockingQueue {
 public:
  BlockingQueue(size_t capacity, Backpressure policy)
      : capacity_(capacity), policy_(policy) {}

  // False once the queue is closed; the item is then dropped whole.
  bool Push(T item) {
    std::unique_lock<std::mutex> lock(mu_);
    if (policy_ == Backpressure::kBlock) {
      not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
    } else if (items_.size() >= capacity_ && !closed_) {
      items_.pop_front();
      ++dropped_;
    }
    if (closed_) return false;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  // nullopt on timeout or when closed and drained.
  std::optional<T> Pop(std::chrono::milliseconds timeout) {
    std::unique_lock<std::mutex> lock(mu_);
    if (!not_empty_.wait_for(lock, timeout,
                             [&] { return closed_ || !items_.empty(); })) {
      return std::nullopt;
    }
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void Close() {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
    not_full_.notify_all();
    not_empty_.notify_all();
  }
  bool closed() const {
    std::lock_guard<std::mutex> lock(mu_);
    return closed_;
  }
  uint64_t dropped() const {
    std::lock_guard<std::mutex> lock(mu_);
    return dropped_;
  }

 private:
  const size_t capacity_;
  const Backpressure policy_;
  mutable std::mutex mu_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<T> items_;
  bool closed_ = false;
  uint64_t dropped_ = 0;
};

// Produces training trajectories (one per Next call), choosing start states
// per configuration: KataGo branching of its previous trajectory, KataGo
// initialization, archive sampling, or the initial state.
class TrainingActor {
 public:
  // `archive` may be null (no archive-based start states).
  TrainingActor(const Game& game, const SelfplayConfig& cfg,
                const Archive* archive, const ParamsSource& params,
                uint64_t seed, uint64_t id_base, uint64_t id_stride);

  Trajectory Next();
  uint64_t trajectories() const { return produced_; }

 private:
  StartState ChooseStart(const Evaluator& evaluator);

  const Game& game_;
  SelfplayConfig cfg_;
  const Archive* archive_;
  const ParamsSource& params_;
  Rng rng_;
  uint64_t next_id_;
  uint64_t id_stride_;
  uint64_t produced_ = 0;
  std::optional<Trajectory> previous_;
};

// Plays full matches from the initial state and writes their search states
// into the archive once per completed match.
class ArchiveActor {
 public:
  ArchiveActor(const Game& game, const SelfplayConfig& cfg, Archive& archive,
               const ParamsSource& params, uint64_t seed);

  // Returns the number of states offered.
  size_t PlayOneMatch();
  uint64_t matches() const { return matches_; }

 private:
  const Game& game_;
  SelfplayConfig cfg_;
  Archive& archive_;
  const ParamsSource& params_;
  Rng rng_;
  uint64_t matches_ = 0;
};

}  // namespace goexploit

#endif  // GOEXPLOIT_SELFPLAY_H_
