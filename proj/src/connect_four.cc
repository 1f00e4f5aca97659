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

// Connect Four on a 6x7 board. Bit (col * 7 + row) holds the cell at
// (row, col), row 0 at the bottom; the 7th bit of each column stays empty
// and separates columns so shifted line tests cannot wrap.

#include <bit>

#include "goexploit/game.h"

namespace goexploit {
namespace {

constexpr int kRows = 6;
constexpr int kCols = 7;
constexpr int kStride = kRows + 1;
constexpr uint64_t kColumnMask = (uint64_t{1} << kRows) - 1;

bool HasFour(uint64_t b) {
  for (int shift : {1, kStride, kStride - 1, kStride + 1}) {
    uint64_t m = b & (b >> shift);
    if (m & (m >> (2 * shift))) return true;
  }
  return false;
}

class ConnectFour final : public Game {
 public:
  GameId id() const override { return GameId::kConnectFour; }
  int rows() const override { return kRows; }
  int cols() const override { return kCols; }
  int num_actions() const override { return kCols; }
  int max_game_length() const override { return kRows * kCols; }

  uint64_t LegalActionMask(const GameState& state) const override {
    if (TerminalOutcome(state)) return 0;
    uint64_t occupied = state.pieces[0] | state.pieces[1];
    uint64_t mask = 0;
    for (int c = 0; c < kCols; ++c) {
      if (!((occupied >> (c * kStride + kRows - 1)) & 1)) mask |= 1ULL << c;
    }
    return mask;
  }

  std::optional<Outcome> TerminalOutcome(
      const GameState& state) const override {
    if (HasFour(state.pieces[0])) return Outcome{+1};
    if (HasFour(state.pieces[1])) return Outcome{-1};
    if (state.ply >= kRows * kCols) return Outcome{0};
    return std::nullopt;
  }

  int CellOwner(const GameState& state, int row, int col) const override {
    uint64_t bit = 1ULL << (col * kStride + row);
    if (state.pieces[0] & bit) return 1;
    if (state.pieces[1] & bit) return 2;
    return 0;
  }

  std::string Render(const GameState& state) const override {
    std::string out;
    out.reserve(kRows * (kCols + 1));
    for (int r = kRows - 1; r >= 0; --r) {
      for (int c = 0; c < kCols; ++c) out += ".XO"[CellOwner(state, r, c)];
      out += '\n';
    }
    return out;
  }

 protected:
  GameState Place(const GameState& state, Action action) const override {
    uint64_t occupied = state.pieces[0] | state.pieces[1];
    int height = std::popcount((occupied >> (action * kStride)) & kColumnMask);
    GameState next = state;
    next.pieces[state.to_move - 1] |= 1ULL << (action * kStride + height);
    next.to_move = static_cast<uint8_t>(3 - state.to_move);
    next.ply = static_cast<uint8_t>(state.ply + 1);
    return next;
  }
};

}  // namespace

const Game& ConnectFourGame() {
  static const ConnectFour game;
  return game;
}

}  // namespace goexploit
