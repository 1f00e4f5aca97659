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

#ifndef GOEXPLOIT_MCTS_H_
#define GOEXPLOIT_MCTS_H_

#include <optional>
#include <span>
#include <vector>

#include "goexploit/game.h"
#include "goexploit/model.h"

namespace goexploit {

// Playout Cap Randomization: each move searches with full_iters with
// probability p_full, otherwise with small_iters.
struct PlayoutCapConfig {
  double p_full = 0.25;
  int full_iters = 100;
  int small_iters = 20;
};

// Forced playouts at the root plus policy-target pruning afterwards.
struct ForcedPlayoutConfig {
  double k_forced = 2.0;
};

struct SearchConfig {
  int iterations = 100;
  double c_puct = 1.0;
  double dirichlet_alpha = 1.0;
  double dirichlet_epsilon = 0.25;
  double temperature = 1.0;
  bool use_root_noise = true;
  std::optional<PlayoutCapConfig> playout_cap;
  std::optional<ForcedPlayoutConfig> forced_playouts;

  // Throws ConfigError naming the offending field ("search.<field>").
  void Validate() const;
};

struct EdgeStats {
  Action action = 0;
  double prior = 0.0;
  int visit_count = 0;
  double total_value = 0.0;  // from the perspective of the node's mover

  double Q() const { return visit_count > 0 ? total_value / visit_count : 0.0; }
};

struct SearchNode {
  GameState state;
  std::vector<EdgeStats> edges;  // one per legal action, ascending
  std::vector<int> children;     // index into the tree, -1 if not created
  bool is_expanded = false;
  bool is_terminal = false;
  double terminal_value = 0.0;  // for the player to move at `state`
  int visits = 0;               // == sum of edge visit counts

  int VisitCount() const { return visits; }
};

struct SearchResult {
  std::vector<double> policy;    // full action space, zero where illegal
  std::vector<int> root_visits;  // full action space
  double root_value = 0.0;       // Q of the most-visited root action
  Action best_action = 0;        // most visited, lowest index on ties
  // Every nonterminal state expanded during the search, root excluded.
  std::vector<GameState> search_states;
  int iterations = 0;
  bool full_search = true;
};

// argmax_a Q + c_puct * P * sqrt(N) / (1 + N(a)) over the given edges, where
// N = sum of their visit counts. Ties go to the lowest index. Returns the
// position within `edges`.
size_t PuctSelectIndex(std::span<const EdgeStats> edges, double c_puct);
Action PuctSelect(const SearchNode& node, double c_puct);

// (1 - eps) * p + eps * d, elementwise.
std::vector<double> MixDirichlet(std::span<const double> priors,
                                 std::span<const double> noise,
                                 double epsilon);

// Draws from Dir(alpha) of the given dimension.
std::vector<double> SampleDirichlet(int n, double alpha, Rng& rng);

// pi(a) = N(a)^(1/tau) / sum_b N(b)^(1/tau). Throws ContractViolation when
// every count is zero or tau <= 0.
std::vector<double> VisitsToPolicy(std::span<const int> visits,
                                   double temperature);

struct PlayoutCap {
  int iterations = 0;
  bool full = true;
};
PlayoutCap SamplePlayoutCap(const PlayoutCapConfig& cfg, Rng& rng);

// Root-level forced-playout count ceil(sqrt(k * P * N)).
int ForcedPlayouts(double k_forced, double prior, int parent_visits);

// Removes forced visits that the PUCT rule does not justify relative to the
// most-visited edge, returning adjusted visit counts aligned with `edges`.
// With k_forced = 0 the counts are unchanged.
std::vector<int> PruneForcedVisits(std::span<const EdgeStats> edges,
                                   double c_puct, double k_forced);

// Single-threaded PUCT search. Owns its tree; a fresh tree per call.
class Search {
 public:
  Search(const Game& game, const Evaluator& evaluator)
      : game_(game), evaluator_(evaluator) {}

  // Runs cfg.iterations simulations (or a playout-capped count when
  // cfg.playout_cap is set). The root is expanded before the first
  // simulation and its expansion is not counted.
  SearchResult Run(const GameState& root, const SearchConfig& cfg, Rng& rng);
  // As Run, with an explicit simulation budget. `full_search` gates root
  // noise and forced playouts.
  SearchResult RunWithBudget(const GameState& root, const SearchConfig& cfg,
                             int iterations, bool full_search, Rng& rng);

  // The tree of the last search; index 0 is the root.
  const std::vector<SearchNode>& tree() const { return tree_; }

 private:
  void Expand(int node_index, std::vector<GameState>* search_states,
              double* value);

  const Game& game_;
  const Evaluator& evaluator_;
  std::vector<SearchNode> tree_;
};

}  // namespace goexploit

#endif  // GOEXPLOIT_MCTS_H_
