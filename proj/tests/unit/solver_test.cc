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


#include <gtest/gtest.h>

#include "goexploit/eval.h"
#include "goexploit/solver.h"
#include "support/oracles.h"

namespace goexploit {
namespace {

const Game& Ttt() { return GetGame(GameId::kTicTacToe); }
const Game& C4() { return GetGame(GameId::kConnectFour); }

// Minimax value of `board` for its side to move, terminal boards included.
int ExactValue(const oracle::Board& board) {
  if (oracle::LineScanWinner(board) != 0) return -1;
  if (oracle::BoardFull(board)) return 0;
  return oracle::MinimaxValue(board);
}

int ProvenValue(Proven p) {
  switch (p) {
    case Proven::kWin:
      return 1;
    case Proven::kLoss:
      return -1;
    default:
      return 0;
  }
}

TEST(SolverTest, TakesImmediateWin) {
  MctsSolver solver(Ttt());
  Rng rng(1);
  GameState s = oracle::FromBoard({1, 1, 0, 2, 2, 0, 0, 0, 0});
  SolverResult r = solver.Search(s, 1000, rng);
  EXPECT_EQ(r.action, 2);
  EXPECT_EQ(r.root, Proven::kWin);
  EXPECT_EQ(r.root_children[2], Proven::kLoss);
  EXPECT_LT(r.iterations, 1000);  // stops once proven
}

TEST(SolverTest, TakesImmediateWinInConnectFour) {
  const Game& g = C4();
  GameState s = g.InitialState();
  for (Action a : {0, 6, 1, 6, 2, 5}) s = g.ApplyAction(s, a);
  MctsSolver solver(g);
  Rng rng(2);
  SolverResult r = solver.Search(s, 2000, rng);
  EXPECT_EQ(r.action, 3);
  EXPECT_EQ(r.root, Proven::kWin);
}

TEST(SolverTest, SingleLegalMoveReturnsAtOnce) {
  GameState s = oracle::FromBoard({1, 2, 1, 1, 2, 2, 2, 1, 0});
  MctsSolver solver(Ttt());
  Rng rng(3);
  SolverResult r = solver.Search(s, 500, rng);
  EXPECT_EQ(r.action, 8);
  EXPECT_EQ(r.iterations, 0);
}

TEST(SolverTest, ProofsAgreeWithMinimax) {
  std::vector<oracle::Board> positions;
  for (const oracle::Board& b : oracle::ReachableBoards())
    if (oracle::LineScanWinner(b) == 0 && !oracle::BoardFull(b))
      positions.push_back(b);
  Rng rng(4);
  std::shuffle(positions.begin(), positions.end(), rng);
  positions.resize(1000);

  MctsSolver solver(Ttt());
  int proven_roots = 0;
  for (const oracle::Board& b : positions) {
    const GameState s = oracle::FromBoard(b);
    SolverResult r = solver.Search(s, 300, rng);
    if (r.root != Proven::kUnknown) {
      ++proven_roots;
      ASSERT_EQ(ProvenValue(r.root), oracle::MinimaxValue(b));
    }
    for (const MctsSolver::Node& node : solver.tree()) {
      if (node.proven == Proven::kUnknown) continue;
      ASSERT_EQ(ProvenValue(node.proven), ExactValue(oracle::ToBoard(node.state)));
    }
    if (r.root == Proven::kWin) {
      const auto optimal = oracle::OptimalMoves(b);
      EXPECT_NE(std::find(optimal.begin(), optimal.end(), r.action),
                optimal.end());
    }
  }
  EXPECT_GT(proven_roots, 500);
}

TEST(SolverTest, ProvesEmptyBoardDrawn) {
  MctsSolver solver(Ttt());
  Rng rng(5);
  SolverResult r = solver.Search(Ttt().InitialState(), 100000, rng);
  EXPECT_EQ(r.root, Proven::kDraw);
  const auto optimal = oracle::OptimalMoves(oracle::ToBoard(Ttt().InitialState()));
  EXPECT_EQ(optimal.size(), 9u);  // every first move draws
}

TEST(SolverTest, AvoidsProvenLosingMoves) {
  // O to move must block 2; every other move is a proven loss.
  GameState s = oracle::FromBoard({1, 1, 0, 0, 2, 0, 0, 0, 0});
  MctsSolver solver(Ttt());
  Rng rng(6);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(solver.Search(s, 2000, rng).action, 2);
}

TEST(ReferenceOpponentTest, IterationsScaleWithLevel) {
  ReferenceOpponent op(C4(), 10, 50);
  EXPECT_EQ(op.iterations(), 500);
  EXPECT_EQ(op.level(), 10);
  EXPECT_THROW(ReferenceOpponent(C4(), 0, 50), ConfigError);
  EXPECT_THROW(ReferenceOpponent(C4(), 1, 0), ConfigError);
}

TEST(ReferenceOpponentTest, StrongerLevelBeatsRandomPlay) {
  SolverAgent strong(C4(), 4, 50);
  RandomAgent random(C4());
  Rng rng(7);
  double score = 0.0;
  for (int i = 0; i < 20; ++i)
    score += PlaySeated(C4(), strong, random, 1 + i % 2, rng).score_a();
  EXPECT_GE(score / 20, 0.9);
}

}  // namespace
}  // namespace goexploit
