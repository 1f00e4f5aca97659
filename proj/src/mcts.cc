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

#include "goexploit/mcts.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

namespace goexploit {
namespace {

double PuctScore(const EdgeStats& e, double sqrt_parent, double c_puct) {
  return e.Q() + c_puct * e.prior * sqrt_parent / (1.0 + e.visit_count);
}

int TotalVisits(std::span<const EdgeStats> edges) {
  int n = 0;
  for (const EdgeStats& e : edges) n += e.visit_count;
  return n;
}

size_t MostVisited(std::span<const EdgeStats> edges) {
  size_t best = 0;
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].visit_count > edges[best].visit_count) best = i;
  }
  return best;
}

}  // namespace

void SearchConfig::Validate() const {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ConfigError("search." + field + ": " + what);
  };
  if (iterations < 1) fail("iterations", "must be >= 1");
  if (!(c_puct > 0.0)) fail("c_puct", "must be > 0");
  if (!(dirichlet_alpha > 0.0)) fail("dirichlet_alpha", "must be > 0");
  if (!(dirichlet_epsilon >= 0.0 && dirichlet_epsilon < 1.0)) {
    fail("dirichlet_epsilon",
         "must be in [0, 1), got " + std::to_string(dirichlet_epsilon));
  }
  if (!(temperature > 0.0)) fail("temperature", "must be > 0");
  if (playout_cap) {
    if (!(playout_cap->p_full > 0.0 && playout_cap->p_full < 1.0)) {
      fail("playout_cap.p_full", "must be in (0, 1)");
    }
    if (playout_cap->full_iters < 1) fail("playout_cap.full_iters", "must be >= 1");
    if (playout_cap->small_iters < 1) fail("playout_cap.small_iters", "must be >= 1");
  }
  if (forced_playouts && !(forced_playouts->k_forced >= 0.0)) {
    fail("forced_playouts.k_forced", "must be >= 0");
  }
}

size_t PuctSelectIndex(std::span<const EdgeStats> edges, double c_puct) {
  GX_REQUIRE(!edges.empty(), "node has no edges");
  const double sqrt_parent = std::sqrt(static_cast<double>(TotalVisits(edges)));
  size_t best = 0;
  double best_score = PuctScore(edges[0], sqrt_parent, c_puct);
  for (size_t i = 1; i < edges.size(); ++i) {
    const double s = PuctScore(edges[i], sqrt_parent, c_puct);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

Action PuctSelect(const SearchNode& node, double c_puct) {
  GX_REQUIRE(node.is_expanded && !node.is_terminal, "node not expandable");
  return node.edges[PuctSelectIndex(node.edges, c_puct)].action;
}

std::vector<double> MixDirichlet(std::span<const double> priors,
                                 std::span<const double> noise,
                                 double epsilon) {
  GX_REQUIRE(priors.size() == noise.size(), "size mismatch");
  std::vector<double> out(priors.size());
  for (size_t i = 0; i < priors.size(); ++i) {
    out[i] = (1.0 - epsilon) * priors[i] + epsilon * noise[i];
  }
  return out;
}

std::vector<double> SampleDirichlet(int n, double alpha, Rng& rng) {
  GX_REQUIRE(n > 0 && alpha > 0.0, "bad Dirichlet parameters");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> d(n);
  double sum = 0.0;
  for (double& x : d) {
    x = gamma(rng);
    sum += x;
  }
  if (!(sum > 0.0)) {
    // Every gamma draw underflowed (tiny alpha): the limit is a vertex.
    std::fill(d.begin(), d.end(), 0.0);
    d[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1.0;
    return d;
  }
  for (double& x : d) x /= sum;
  return d;
}

std::vector<double> VisitsToPolicy(std::span<const int> visits,
                                   double temperature) {
  GX_REQUIRE(temperature > 0.0, "temperature must be positive");
  const int max_visits =
      visits.empty() ? 0 : *std::max_element(visits.begin(), visits.end());
  GX_REQUIRE(max_visits > 0, "all visit counts are zero");
  // Scale by the max first so N^(1/tau) cannot overflow for small tau.
  const double inv_tau = 1.0 / temperature;
  std::vector<double> pi(visits.size(), 0.0);
  double sum = 0.0;
  for (size_t a = 0; a < visits.size(); ++a) {
    if (visits[a] <= 0) continue;
    pi[a] = std::pow(static_cast<double>(visits[a]) / max_visits, inv_tau);
    sum += pi[a];
  }
  for (double& p : pi) p /= sum;
  return pi;
}

PlayoutCap SamplePlayoutCap(const PlayoutCapConfig& cfg, Rng& rng) {
  std::bernoulli_distribution full(cfg.p_full);
  if (full(rng)) return {cfg.full_iters, true};
  return {cfg.small_iters, false};
}

int ForcedPlayouts(double k_forced, double prior, int parent_visits) {
  if (k_forced <= 0.0 || prior <= 0.0 || parent_visits <= 0) return 0;
  return static_cast<int>(std::ceil(std::sqrt(k_forced * prior * parent_visits)));
}

std::vector<int> PruneForcedVisits(std::span<const EdgeStats> edges,
                                   double c_puct, double k_forced) {
  std::vector<int> adjusted(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) adjusted[i] = edges[i].visit_count;
  if (edges.empty() || k_forced <= 0.0) return adjusted;

  const int total = TotalVisits(edges);
  const double sqrt_total = std::sqrt(static_cast<double>(total));
  const size_t best = MostVisited(edges);
  const double best_score = PuctScore(edges[best], sqrt_total, c_puct);

  for (size_t i = 0; i < edges.size(); ++i) {
    if (i == best) continue;
    const EdgeStats& e = edges[i];
    const int forced = ForcedPlayouts(k_forced, e.prior, total);
    const int floor = std::max(0, e.visit_count - forced);
    // Smallest count in [floor, N] that keeps this edge's PUCT score below
    // the most-visited edge's; the score only falls as the count grows.
    int n = floor;
    while (n < e.visit_count &&
           e.Q() + c_puct * e.prior * sqrt_total / (1.0 + n) >= best_score) {
      ++n;
    }
    adjusted[i] = n;
  }
  return adjusted;
}

void Search::Expand(int node_index, std::vector<GameState>* search_states,
                    double* value) {
  SearchNode& node = tree_[node_index];
  if (auto outcome = game_.TerminalOutcome(node.state)) {
    node.is_terminal = true;
    node.terminal_value = outcome->ForPlayer(node.state.to_move);
    *value = node.terminal_value;
    return;
  }
  Evaluation eval = evaluator_.Evaluate(node.state);
  uint64_t mask = game_.LegalActionMask(node.state);
  const int n = std::popcount(mask);
  node.edges.resize(n);
  node.children.assign(n, -1);
  double sum = 0.0;
  for (int i = 0; mask; ++i, mask &= mask - 1) {
    const Action a = std::countr_zero(mask);
    node.edges[i].action = a;
    node.edges[i].prior = std::max(0.0, eval.policy[a]);
    sum += node.edges[i].prior;
  }
  for (EdgeStats& e : node.edges) {
    e.prior = sum > 0.0 ? e.prior / sum : 1.0 / n;
  }
  node.is_expanded = true;
  if (search_states != nullptr) search_states->push_back(node.state);
  *value = eval.value;
}

SearchResult Search::Run(const GameState& root, const SearchConfig& cfg,
                         Rng& rng) {
  if (cfg.playout_cap) {
    PlayoutCap cap = SamplePlayoutCap(*cfg.playout_cap, rng);
    return RunWithBudget(root, cfg, cap.iterations, cap.full, rng);
  }
  return RunWithBudget(root, cfg, cfg.iterations, true, rng);
}

SearchResult Search::RunWithBudget(const GameState& root,
                                   const SearchConfig& cfg, int iterations,
                                   bool full_search, Rng& rng) {
  GX_REQUIRE(iterations >= 1, "iterations must be >= 1");
  GX_REQUIRE(root.game == game_.id(), "state belongs to another game");
  GX_REQUIRE(!game_.IsTerminal(root), "root is terminal");

  SearchResult result;
  result.iterations = iterations;
  result.full_search = full_search;

  tree_.clear();
  tree_.reserve(static_cast<size_t>(iterations) + 1);
  tree_.emplace_back();
  tree_[0].state = root;
  double root_value = 0.0;
  Expand(0, nullptr, &root_value);

  if (cfg.use_root_noise && full_search && cfg.dirichlet_epsilon > 0.0) {
    std::vector<EdgeStats>& edges = tree_[0].edges;
    std::vector<double> priors(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) priors[i] = edges[i].prior;
    std::vector<double> noise = SampleDirichlet(
        static_cast<int>(edges.size()), cfg.dirichlet_alpha, rng);
    std::vector<double> mixed =
        MixDirichlet(priors, noise, cfg.dirichlet_epsilon);
    for (size_t i = 0; i < edges.size(); ++i) edges[i].prior = mixed[i];
  }

  const bool force_root = full_search && cfg.forced_playouts.has_value() &&
                          cfg.forced_playouts->k_forced > 0.0;
  std::vector<std::pair<int, size_t>> path;
  for (int it = 0; it < iterations; ++it) {
    path.clear();
    int cur = 0;
    double leaf_value = 0.0;  // for the player to move at the leaf
    while (true) {
      size_t e;
      if (cur == 0 && force_root) {
        const SearchNode& node = tree_[0];
        const double sqrt_parent = std::sqrt(static_cast<double>(node.visits));
        e = node.edges.size();
        double best = 0.0;
        for (size_t i = 0; i < node.edges.size(); ++i) {
          const EdgeStats& edge = node.edges[i];
          if (edge.visit_count >= ForcedPlayouts(cfg.forced_playouts->k_forced,
                                                 edge.prior, node.visits)) {
            continue;
          }
          const double s = PuctScore(edge, sqrt_parent, cfg.c_puct);
          if (e == node.edges.size() || s > best) {
            best = s;
            e = i;
          }
        }
        if (e == node.edges.size()) e = PuctSelectIndex(node.edges, cfg.c_puct);
      } else {
        e = PuctSelectIndex(tree_[cur].edges, cfg.c_puct);
      }
      path.emplace_back(cur, e);
      const int child = tree_[cur].children[e];
      if (child < 0) {
        GameState next =
            game_.ApplyAction(tree_[cur].state, tree_[cur].edges[e].action);
        const int ci = static_cast<int>(tree_.size());
        tree_.emplace_back();
        tree_[ci].state = next;
        tree_[cur].children[e] = ci;
        Expand(ci, &result.search_states, &leaf_value);
        break;
      }
      if (tree_[child].is_terminal) {
        leaf_value = tree_[child].terminal_value;
        break;
      }
      cur = child;
    }
    // Each edge's value is for the mover at its parent: flip every ply.
    double v = leaf_value;
    for (auto it_path = path.rbegin(); it_path != path.rend(); ++it_path) {
      v = -v;
      SearchNode& node = tree_[it_path->first];
      EdgeStats& edge = node.edges[it_path->second];
      edge.visit_count += 1;
      edge.total_value += v;
      node.visits += 1;
    }
  }

  const SearchNode& rootn = tree_[0];
  const int actions = game_.num_actions();
  result.root_visits.assign(actions, 0);
  for (const EdgeStats& e : rootn.edges) {
    result.root_visits[e.action] = e.visit_count;
  }
  const size_t best = MostVisited(rootn.edges);
  result.best_action = rootn.edges[best].action;
  result.root_value = rootn.edges[best].Q();

  if (force_root) {
    std::vector<int> pruned = PruneForcedVisits(
        rootn.edges, cfg.c_puct, cfg.forced_playouts->k_forced);
    std::vector<int> target(actions, 0);
    for (size_t i = 0; i < rootn.edges.size(); ++i) {
      target[rootn.edges[i].action] = pruned[i];
    }
    result.policy = VisitsToPolicy(target, cfg.temperature);
  } else {
    result.policy = VisitsToPolicy(result.root_visits, cfg.temperature);
  }
  return result;
}

}  // namespace goexploit
