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

#include <array>

#include "goexploit/game.h"

namespace goexploit {
namespace {

// Cell index = row * 3 + col, row 0 on top.
constexpr std::array<uint64_t, 8> kLines = {
    0007, 0070, 0700,  // rows
    0111, 0222, 0444,  // columns
    0421, 0124,        // diagonals
};
constexpr uint64_t kFull = 0777;

bool HasLine(uint64_t b) {
  for (uint64_t line : kLines) {
    if ((b & line) == line) return true;
  }
  return false;
}

class TicTacToe final : public Game {
 public:
  GameId id() const override { return GameId::kTicTacToe; }
  int rows() const override { return 3; }
  int cols() const override { return 3; }
  int num_actions() const override { return 9; }
  int max_game_length() const override { return 9; }

  uint64_t LegalActionMask(const GameState& state) const override {
    if (TerminalOutcome(state)) return 0;
    return kFull & ~(state.pieces[0] | state.pieces[1]);
  }

  std::optional<Outcome> TerminalOutcome(
      const GameState& state) const override {
    if (HasLine(state.pieces[0])) return Outcome{+1};
    if (HasLine(state.pieces[1])) return Outcome{-1};
    if ((state.pieces[0] | state.pieces[1]) == kFull) return Outcome{0};
    return std::nullopt;
  }

  int CellOwner(const GameState& state, int row, int col) const override {
    uint64_t bit = 1ULL << (row * 3 + col);
    if (state.pieces[0] & bit) return 1;
    if (state.pieces[1] & bit) return 2;
    return 0;
  }

  std::string Render(const GameState& state) const override {
    std::string out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out += ".XO"[CellOwner(state, r, c)];
      out += '\n';
    }
    return out;
  }

 protected:
  GameState Place(const GameState& state, Action action) const override {
    GameState next = state;
    next.pieces[state.to_move - 1] |= 1ULL << action;
    next.to_move = static_cast<uint8_t>(3 - state.to_move);
    next.ply = static_cast<uint8_t>(state.ply + 1);
    return next;
  }
};

}  // namespace

const Game& TicTacToeGame() {
  static const TicTacToe game;
  return game;
}

}  // namespace goexploit
