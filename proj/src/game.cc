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

#include "goexploit/game.h"

#include <bit>
#include <charconv>
#include <cstdio>

namespace goexploit {

const Game& ConnectFourGame();
const Game& TicTacToeGame();

GameId ParseGameId(std::string_view name) {
  if (name == "connect4") return GameId::kConnectFour;
  if (name == "tictactoe") return GameId::kTicTacToe;
  throw ConfigError("unknown game id '" + std::string(name) +
                    "' (expected connect4 or tictactoe)");
}

std::string_view GameName(GameId id) {
  switch (id) {
    case GameId::kConnectFour:
      return "connect4";
    case GameId::kTicTacToe:
      return "tictactoe";
  }
  return "unknown";
}

std::string StateKey::ToString() const {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx%x",
                static_cast<unsigned long long>(p1),
                static_cast<unsigned long long>(p2), to_move);
  return buf;
}

StateKey StateKey::FromString(std::string_view text, GameId game) {
  if (text.size() != 33) {
    throw ConfigError("malformed state key '" + std::string(text) + "'");
  }
  StateKey key;
  key.game = game;
  auto parse = [&](std::string_view part, uint64_t& out) {
    auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), out, 16);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError("malformed state key '" + std::string(text) + "'");
    }
  };
  uint64_t mover = 0;
  parse(text.substr(0, 16), key.p1);
  parse(text.substr(16, 16), key.p2);
  parse(text.substr(32, 1), mover);
  if (mover != 1 && mover != 2) {
    throw ConfigError("malformed state key '" + std::string(text) + "'");
  }
  key.to_move = static_cast<uint8_t>(mover);
  return key;
}

StateKey KeyOf(const GameState& state) {
  return StateKey{state.pieces[0], state.pieces[1], state.to_move, state.game};
}

GameState Game::InitialState() const {
  GameState s;
  s.game = id();
  return s;
}

std::vector<Action> Game::LegalActions(const GameState& state) const {
  GX_REQUIRE(!IsTerminal(state), "state is terminal");
  uint64_t mask = LegalActionMask(state);
  std::vector<Action> actions;
  actions.reserve(std::popcount(mask));
  while (mask) {
    actions.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return actions;
}

bool Game::IsLegal(const GameState& state, Action action) const {
  if (action < 0 || action >= num_actions()) return false;
  return (LegalActionMask(state) >> action) & 1;
}

GameState Game::ApplyAction(const GameState& state, Action action) const {
  GX_REQUIRE(state.game == id(), "state belongs to another game");
  GX_REQUIRE(IsLegal(state, action),
             "illegal action " + std::to_string(action));
  return Place(state, action);
}

const Game& GetGame(GameId id) {
  switch (id) {
    case GameId::kConnectFour:
      return ConnectFourGame();
    case GameId::kTicTacToe:
      return TicTacToeGame();
  }
  throw ConfigError("unknown game id");
}

const Game& GetGame(std::string_view name) { return GetGame(ParseGameId(name)); }

}  // namespace goexploit
