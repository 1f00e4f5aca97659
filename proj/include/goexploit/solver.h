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

#ifndef GOEXPLOIT_SOLVER_H_
#define GOEXPLOIT_SOLVER_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "goexploit/game.h"

namespace goexploit {

// Game-theoretic value of a node for the player to move there.
enum class Proven : int8_t { kUnknown = 0, kWin, kLoss, kDraw };

struct SolverResult {
  Action action = 0;
  Proven root = Proven::kUnknown;
  int iterations = 0;              // simulations actually run
  std::vector<int> root_visits;    // full action space
  std::vector<Proven> root_children;  // full action space, child's view
};

// UCT with random playouts that propagates proven wins, losses and draws:
//   some child lost for its mover          -> node won
//   every child won for its mover          -> node lost
//   every child proven, none lost for mover -> node drawn
// Selection tries unvisited children first in action order, then skips
// proven children while an unproven one remains.
class MctsSolver {
 public:
  explicit MctsSolver(const Game& game, double c_uct = std::sqrt(2.0))
      : game_(game), c_uct_(c_uct) {}

  // Fresh tree per call. Stops early once the root is proven. Returns a
  // proving move for a won root, else the most-visited move that is not
  // proven lost (the most-visited move if all are).
  SolverResult Search(const GameState& root, int iterations, Rng& rng);

  struct Node {
    GameState state;
    int parent = -1;
    uint64_t untried = 0;       // legal actions without a child yet
    std::vector<int> children;  // by action, -1 if absent
    int visits = 0;
    double total = 0.0;  // for the player who moved into this node
    Proven proven = Proven::kUnknown;
  };
  // The tree of the last search; index 0 is the root.
  const std::vector<Node>& tree() const { return tree_; }

 private:
  int NewNode(const GameState& state, int parent);
  int Select(int node) const;
  double Playout(GameState state, Rng& rng) const;
  void PropagateProof(int node);

  const Game& game_;
  double c_uct_;
  std::vector<Node> tree_;
};

// Fixed-strength reference opponent: level x base_iterations solver
// iterations per move, no state carried between moves or games.
class ReferenceOpponent {
 public:
  ReferenceOpponent(const Game& game, int level, int base_iterations,
                    double c_uct = std::sqrt(2.0));

  int level() const { return level_; }
  int iterations() const { return iterations_; }
  Action SelectAction(const GameState& state, Rng& rng) const;

 private:
  const Game& game_;
  int level_;
  int iterations_;
  double c_uct_;
};

}  // namespace goexploit

#endif  // GOEXPLOIT_SOLVER_H_
