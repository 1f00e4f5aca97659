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

#include <set>

#include "goexploit/game.h"
#include "support/oracles.h"

namespace goexploit {
namespace {

GameState Play(const Game& game, std::initializer_list<Action> moves) {
  GameState s = game.InitialState();
  for (Action a : moves) s = game.ApplyAction(s, a);
  return s;
}

TEST(GameIdTest, ParsesKnownNames) {
  EXPECT_EQ(ParseGameId("connect4"), GameId::kConnectFour);
  EXPECT_EQ(ParseGameId("tictactoe"), GameId::kTicTacToe);
  EXPECT_THROW(ParseGameId("go"), ConfigError);
  EXPECT_EQ(GetGame("connect4").num_actions(), 7);
  EXPECT_EQ(GetGame("tictactoe").num_actions(), 9);
}

TEST(ConnectFourTest, InitialState) {
  const Game& g = GetGame(GameId::kConnectFour);
  GameState s = g.InitialState();
  EXPECT_EQ(s.to_move, 1);
  EXPECT_EQ(s.ply, 0);
  EXPECT_FALSE(g.IsTerminal(s));
  EXPECT_EQ(g.LegalActions(s), (std::vector<Action>{0, 1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(g.max_game_length(), 42);
}

TEST(ConnectFourTest, PiecesStackInColumns) {
  const Game& g = GetGame(GameId::kConnectFour);
  GameState s = Play(g, {3, 3, 3});
  EXPECT_EQ(g.CellOwner(s, 0, 3), 1);
  EXPECT_EQ(g.CellOwner(s, 1, 3), 2);
  EXPECT_EQ(g.CellOwner(s, 2, 3), 1);
  EXPECT_EQ(g.CellOwner(s, 3, 3), 0);
  EXPECT_EQ(s.to_move, 2);
  EXPECT_EQ(s.ply, 3);
}

TEST(ConnectFourTest, FullColumnIsIllegal) {
  const Game& g = GetGame(GameId::kConnectFour);
  GameState s = Play(g, {0, 0, 0, 0, 0, 0});
  EXPECT_FALSE(g.IsLegal(s, 0));
  EXPECT_THROW(g.ApplyAction(s, 0), ContractViolation);
  EXPECT_THROW(g.ApplyAction(s, 7), ContractViolation);
  EXPECT_THROW(g.ApplyAction(s, -1), ContractViolation);
}

TEST(ConnectFourTest, DetectsEachDirection) {
  const Game& g = GetGame(GameId::kConnectFour);
  // Horizontal for X along the bottom row.
  EXPECT_EQ(g.TerminalOutcome(Play(g, {0, 0, 1, 1, 2, 2, 3}))->value, 1);
  // Vertical for X.
  EXPECT_EQ(g.TerminalOutcome(Play(g, {0, 1, 0, 1, 0, 1, 0}))->value, 1);
  // Rising diagonal for X: (0,0) (1,1) (2,2) (3,3).
  EXPECT_EQ(
      g.TerminalOutcome(Play(g, {0, 1, 1, 2, 2, 3, 2, 3, 3, 6, 3}))->value, 1);
  // Falling diagonal for O: (3,0) (2,1) (1,2) (0,3).
  GameState s = Play(g, {6, 3, 2, 2, 1, 1, 0, 1, 0, 0, 6, 0});
  EXPECT_EQ(g.TerminalOutcome(s)->value, -1);
  EXPECT_EQ(oracle::ConnectFourWinner(s), 2);
}

TEST(ConnectFourTest, NoWrapAroundBetweenColumns) {
  const Game& g = GetGame(GameId::kConnectFour);
  // X at the top of column 0 and the bottom three of column 1 are adjacent
  // bits in the layout but not a line on the board.
  GameState s = Play(g, {0, 6, 0, 6, 0, 6, 1, 0, 1, 0, 1, 0});
  EXPECT_EQ(oracle::ConnectFourWinner(s), 0);
  EXPECT_FALSE(g.IsTerminal(s));
}

TEST(ConnectFourTest, RandomGamesAgreeWithScanOracle) {
  const Game& g = GetGame(GameId::kConnectFour);
  Rng rng(7);
  int draws = 0;
  for (int game = 0; game < 3000; ++game) {
    GameState s = g.InitialState();
    while (true) {
      const int winner = oracle::ConnectFourWinner(s);
      auto outcome = g.TerminalOutcome(s);
      if (winner != 0) {
        ASSERT_TRUE(outcome.has_value());
        ASSERT_EQ(outcome->value, winner == 1 ? 1 : -1);
        break;
      }
      if (s.ply == 42) {
        ASSERT_TRUE(outcome.has_value());
        ASSERT_EQ(outcome->value, 0);
        ++draws;
        break;
      }
      ASSERT_FALSE(outcome.has_value());
      std::vector<Action> legal = g.LegalActions(s);
      std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
      s = g.ApplyAction(s, legal[pick(rng)]);
    }
  }
  EXPECT_GE(draws, 0);
}

TEST(ConnectFourTest, RenderPutsBottomRowLast) {
  const Game& g = GetGame(GameId::kConnectFour);
  GameState s = Play(g, {0, 6});
  EXPECT_EQ(g.Render(s),
            ".......\n.......\n.......\n.......\n.......\nX.....O\n");
}

TEST(TicTacToeTest, ReachableStateCountMatchesBfsOracle) {
  const Game& g = GetGame(GameId::kTicTacToe);
  const std::vector<oracle::Board> boards = oracle::ReachableBoards();
  EXPECT_EQ(boards.size(), 5478u);

  std::set<std::pair<uint64_t, uint64_t>> seen;
  std::vector<GameState> frontier = {g.InitialState()};
  seen.insert({0, 0});
  while (!frontier.empty()) {
    GameState s = frontier.back();
    frontier.pop_back();
    if (g.IsTerminal(s)) continue;
    for (Action a : g.LegalActions(s)) {
      GameState next = g.ApplyAction(s, a);
      if (seen.insert({next.pieces[0], next.pieces[1]}).second) {
        frontier.push_back(next);
      }
    }
  }
  EXPECT_EQ(seen.size(), 5478u);
}

TEST(TicTacToeTest, TerminalOutcomesMatchLineScan) {
  const Game& g = GetGame(GameId::kTicTacToe);
  int terminals = 0;
  for (const oracle::Board& b : oracle::ReachableBoards()) {
    const GameState s = oracle::FromBoard(b);
    const int winner = oracle::LineScanWinner(b);
    auto outcome = g.TerminalOutcome(s);
    if (winner != 0) {
      ASSERT_TRUE(outcome.has_value());
      EXPECT_EQ(outcome->value, winner == 1 ? 1 : -1);
    } else if (oracle::BoardFull(b)) {
      ASSERT_TRUE(outcome.has_value());
      EXPECT_EQ(outcome->value, 0);
    } else {
      EXPECT_FALSE(outcome.has_value());
      EXPECT_EQ(g.LegalActionMask(s) != 0, true);
    }
    if (outcome) {
      ++terminals;
      EXPECT_EQ(g.LegalActionMask(s), 0u);
      EXPECT_THROW(g.LegalActions(s), ContractViolation);
    }
  }
  EXPECT_EQ(terminals, 958);
}

TEST(StateKeyTest, RoundTripsAndDistinguishesMover) {
  const Game& g = GetGame(GameId::kConnectFour);
  GameState s = Play(g, {3, 4, 3});
  StateKey key = KeyOf(s);
  std::string text = key.ToString();
  EXPECT_EQ(text.size(), 33u);
  EXPECT_EQ(StateKey::FromString(text, GameId::kConnectFour), key);
  GameState other = s;
  other.to_move = 1;
  EXPECT_NE(KeyOf(other).ToString(), text);
  EXPECT_THROW(StateKey::FromString("xyz", GameId::kConnectFour), ConfigError);
}

TEST(OutcomeTest, ForPlayerFlipsForPlayerTwo) {
  Outcome o{1};
  EXPECT_EQ(o.ForPlayer(1), 1);
  EXPECT_EQ(o.ForPlayer(2), -1);
  EXPECT_EQ(Outcome{0}.ForPlayer(2), 0);
}

}  // namespace
}  // namespace goexploit
