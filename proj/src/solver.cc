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

#include "goexploit/solver.h"

#include <bit>
#include <limits>

namespace goexploit {
namespace {

double ValueOf(Proven p) {
  switch (p) {
    case Proven::kWin:
      return 1.0;
    case Proven::kLoss:
      return -1.0;
    default:
      return 0.0;
  }
}

Proven FromOutcome(int value) {
  if (value > 0) return Proven::kWin;
  if (value < 0) return Proven::kLoss;
  return Proven::kDraw;
}

// Index of the n-th set bit of mask (n counted from 0).
int NthSetBit(uint64_t mask, int n) {
  for (int i = 0; i < n; ++i) mask &= mask - 1;
  return std::countr_zero(mask);
}

}  // namespace

int MctsSolver::NewNode(const GameState& state, int parent) {
  Node node;
  node.state = state;
  node.parent = parent;
  node.children.assign(game_.num_actions(), -1);
  if (auto outcome = game_.TerminalOutcome(state)) {
    node.proven = FromOutcome(outcome->ForPlayer(state.to_move));
  } else {
    node.untried = game_.LegalActionMask(state);
  }
  tree_.push_back(std::move(node));
  return static_cast<int>(tree_.size()) - 1;
}

int MctsSolver::Select(int index) const {
  const Node& node = tree_[index];
  const double log_n = std::log(static_cast<double>(node.visits));
  int best = -1;
  bool best_unproven = false;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int child : node.children) {
    if (child < 0) continue;
    const Node& c = tree_[child];
    const bool unproven = c.proven == Proven::kUnknown;
    if (best_unproven && !unproven) continue;
    const double score =
        c.total / c.visits + c_uct_ * std::sqrt(log_n / c.visits);
    if ((unproven && !best_unproven) || score > best_score) {
      best = child;
      best_score = score;
      best_unproven = unproven;
    }
  }
  return best;
}

double MctsSolver::Playout(GameState state, Rng& rng) const {
  const int mover = state.to_move;
  while (true) {
    if (auto outcome = game_.TerminalOutcome(state)) {
      return outcome->ForPlayer(mover);
    }
    const uint64_t mask = game_.LegalActionMask(state);
    std::uniform_int_distribution<int> pick(0, std::popcount(mask) - 1);
    state = game_.ApplyAction(state, NthSetBit(mask, pick(rng)));
  }
}

void MctsSolver::PropagateProof(int index) {
  for (int p = tree_[index].parent; p >= 0; p = tree_[p].parent) {
    Node& node = tree_[p];
    if (node.proven != Proven::kUnknown) return;
    bool any_loss = false;
    bool all_proven = node.untried == 0;
    bool all_win = true;
    for (int child : node.children) {
      if (child < 0) continue;
      const Proven v = tree_[child].proven;
      if (v == Proven::kLoss) any_loss = true;
      if (v == Proven::kUnknown) all_proven = false;
      if (v != Proven::kWin) all_win = false;
    }
    if (any_loss) {
      node.proven = Proven::kWin;
    } else if (all_proven) {
      node.proven = all_win ? Proven::kLoss : Proven::kDraw;
    } else {
      return;
    }
  }
}

SolverResult MctsSolver::Search(const GameState& root, int iterations,
                                Rng& rng) {
  GX_REQUIRE(!game_.IsTerminal(root), "root is terminal");
  GX_REQUIRE(iterations >= 1, "iterations must be >= 1");
  tree_.clear();
  tree_.reserve(static_cast<size_t>(iterations) + 1);
  NewNode(root, -1);

  SolverResult result;
  const uint64_t legal = tree_[0].untried;
  if (std::popcount(legal) == 1) {
    result.action = std::countr_zero(legal);
  } else {
    for (int it = 0; it < iterations; ++it) {
      if (tree_[0].proven != Proven::kUnknown) break;
      int n = 0;
      while (tree_[n].proven == Proven::kUnknown && tree_[n].untried == 0) {
        n = Select(n);
      }
      double value;  // for the player to move at n
      if (tree_[n].proven != Proven::kUnknown) {
        value = ValueOf(tree_[n].proven);
      } else {
        const Action a = std::countr_zero(tree_[n].untried);
        tree_[n].untried &= tree_[n].untried - 1;
        const GameState next = game_.ApplyAction(tree_[n].state, a);
        const int child = NewNode(next, n);
        tree_[n].children[a] = child;
        n = child;
        if (tree_[n].proven != Proven::kUnknown) {
          value = ValueOf(tree_[n].proven);
          PropagateProof(n);
        } else {
          value = Playout(next, rng);
        }
      }
      for (int m = n; m >= 0; m = tree_[m].parent) {
        ++tree_[m].visits;
        tree_[m].total -= value;
        value = -value;
      }
      ++result.iterations;
    }
  }

  const Node& r = tree_[0];
  result.root = r.proven;
  result.root_visits.assign(game_.num_actions(), 0);
  result.root_children.assign(game_.num_actions(), Proven::kUnknown);
  for (int a = 0; a < game_.num_actions(); ++a) {
    if (r.children[a] >= 0) {
      result.root_visits[a] = tree_[r.children[a]].visits;
      result.root_children[a] = tree_[r.children[a]].proven;
    }
  }
  if (std::popcount(legal) == 1) return result;

  if (r.proven == Proven::kWin) {
    for (int a = 0; a < game_.num_actions(); ++a) {
      if (result.root_children[a] == Proven::kLoss) {
        result.action = a;
        return result;
      }
    }
  }
  int best = -1;
  for (uint64_t m = legal; m; m &= m - 1) {
    const int a = std::countr_zero(m);
    if (result.root_children[a] == Proven::kWin) continue;
    if (best < 0 || result.root_visits[a] > result.root_visits[best]) best = a;
  }
  if (best < 0) {
    for (uint64_t m = legal; m; m &= m - 1) {
      const int a = std::countr_zero(m);
      if (best < 0 || result.root_visits[a] > result.root_visits[best]) {
        best = a;
      }
    }
  }
  result.action = best;
  return result;
}

ReferenceOpponent::ReferenceOpponent(const Game& game, int level,
                                     int base_iterations, double c_uct)
    : game_(game), level_(level), c_uct_(c_uct) {
  if (level < 1) throw ConfigError("level: must be >= 1");
  if (base_iterations < 1) throw ConfigError("base_iterations: must be >= 1");
  iterations_ = level * base_iterations;
}

Action ReferenceOpponent::SelectAction(const GameState& state,
                                       Rng& rng) const {
  MctsSolver solver(game_, c_uct_);
  return solver.Search(state, iterations_, rng).action;
}

}  // namespace goexploit
