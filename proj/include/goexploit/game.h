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

#ifndef GOEXPLOIT_GAME_H_
#define GOEXPLOIT_GAME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goexploit/common.h"

namespace goexploit {

enum class GameId : uint8_t { kConnectFour = 0, kTicTacToe = 1 };

// Parses "connect4" / "tictactoe". Throws ConfigError otherwise.
GameId ParseGameId(std::string_view name);
std::string_view GameName(GameId id);

using Action = int;

// Two-player board position for any game of at most 64 cells. The bitboards
// use the owning game's own cell layout; go through Game to interpret them.
// Values are immutable in practice: every transition returns a new state.
struct GameState {
  uint64_t pieces[2] = {0, 0};  // [0] player 1, [1] player 2
  uint8_t to_move = 1;          // 1 or 2
  uint8_t ply = 0;
  GameId game = GameId::kConnectFour;

  friend bool operator==(const GameState&, const GameState&) = default;
};

// Terminal result, always from player 1's point of view.
struct Outcome {
  int value = 0;  // +1 player 1 won, -1 player 2 won, 0 draw

  // The same result seen by `player`.
  int ForPlayer(int player) const { return player == 1 ? value : -value; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Canonical identity of a position: board plus side to move.
struct StateKey {
  uint64_t p1 = 0;
  uint64_t p2 = 0;
  uint8_t to_move = 0;
  GameId game = GameId::kConnectFour;

  friend bool operator==(const StateKey&, const StateKey&) = default;
  // 33 hex characters; stable across runs and platforms.
  std::string ToString() const;
  static StateKey FromString(std::string_view text, GameId game);
};

StateKey KeyOf(const GameState& state);

struct StateKeyHash {
  size_t operator()(const StateKey& k) const noexcept {
    uint64_t h = k.p1 * 0x9e3779b97f4a7c15ULL;
    h ^= (k.p2 + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2));
    h ^= static_cast<uint64_t>(k.to_move) << 61;
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

// Rules of a two-player, zero-sum, perfect-information grid game.
// Implementations are stateless and shared by reference.
class Game {
 public:
  virtual ~Game() = default;

  virtual GameId id() const = 0;
  std::string_view name() const { return GameName(id()); }
  virtual int rows() const = 0;
  virtual int cols() const = 0;
  virtual int num_actions() const = 0;
  // Upper bound on plies from the initial state to any terminal state.
  virtual int max_game_length() const = 0;

  GameState InitialState() const;

  // Bit i set iff action i is legal. Zero for terminal states.
  virtual uint64_t LegalActionMask(const GameState& state) const = 0;

  // Ascending order. Throws ContractViolation on a terminal state.
  std::vector<Action> LegalActions(const GameState& state) const;
  bool IsLegal(const GameState& state, Action action) const;

  // Throws ContractViolation if the action is illegal.
  GameState ApplyAction(const GameState& state, Action action) const;

  virtual std::optional<Outcome> TerminalOutcome(
      const GameState& state) const = 0;
  bool IsTerminal(const GameState& state) const {
    return TerminalOutcome(state).has_value();
  }

  // 0 empty, 1 player 1, 2 player 2. Row 0 is the bottom row for gravity
  // games and the top row otherwise.
  virtual int CellOwner(const GameState& state, int row, int col) const = 0;

  // Text board, one line per row, cells in {., X, O}.
  virtual std::string Render(const GameState& state) const = 0;

 protected:
  // Places the mover's piece for an already-validated action.
  virtual GameState Place(const GameState& state, Action action) const = 0;
};

const Game& GetGame(GameId id);
// Throws ConfigError for unknown names.
const Game& GetGame(std::string_view name);

}  // namespace goexploit

template <>
struct std::hash<goexploit::StateKey> : goexploit::StateKeyHash {};

#endif  // GOEXPLOIT_GAME_H_
