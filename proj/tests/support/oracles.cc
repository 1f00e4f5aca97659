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

#include "support/oracles.h"

#include <cmath>
#include <deque>
#include <set>

namespace goexploit::oracle {
namespace {

int Encode(const Board& b) {
  int code = 0;
  for (int i = 8; i >= 0; --i) code = code * 3 + b[i];
  return code;
}

int Negamax(const Board& b, std::vector<int8_t>& memo) {
  const int code = Encode(b);
  if (memo[code] != 2) return memo[code];
  const int me = PlayerToMove(b);
  int value;
  const int winner = LineScanWinner(b);
  if (winner != 0) {
    value = winner == me ? 1 : -1;
  } else if (BoardFull(b)) {
    value = 0;
  } else {
    value = -2;
    for (int i = 0; i < 9; ++i) {
      if (b[i] != 0) continue;
      Board next = b;
      next[i] = me;
      value = std::max(value, -Negamax(next, memo));
    }
  }
  memo[code] = static_cast<int8_t>(value);
  return value;
}

std::vector<int8_t>& Memo() {
  static std::vector<int8_t> memo(19683, 2);
  return memo;
}

}  // namespace

Board ToBoard(const GameState& state) {
  Board b{};
  for (int i = 0; i < 9; ++i) {
    if ((state.pieces[0] >> i) & 1) b[i] = 1;
    if ((state.pieces[1] >> i) & 1) b[i] = 2;
  }
  return b;
}

GameState FromBoard(const Board& board) {
  GameState s;
  s.game = GameId::kTicTacToe;
  int count = 0;
  for (int i = 0; i < 9; ++i) {
    if (board[i] == 1) s.pieces[0] |= 1ULL << i;
    if (board[i] == 2) s.pieces[1] |= 1ULL << i;
    if (board[i] != 0) ++count;
  }
  s.ply = static_cast<uint8_t>(count);
  s.to_move = static_cast<uint8_t>(PlayerToMove(board));
  return s;
}

int PlayerToMove(const Board& board) {
  int x = 0;
  int o = 0;
  for (int v : board) {
    if (v == 1) ++x;
    if (v == 2) ++o;
  }
  return x == o ? 1 : 2;
}

int LineScanWinner(const Board& b) {
  for (int r = 0; r < 3; ++r) {
    if (b[r * 3] != 0 && b[r * 3] == b[r * 3 + 1] && b[r * 3] == b[r * 3 + 2]) {
      return b[r * 3];
    }
  }
  for (int c = 0; c < 3; ++c) {
    if (b[c] != 0 && b[c] == b[c + 3] && b[c] == b[c + 6]) return b[c];
  }
  if (b[4] != 0 && b[0] == b[4] && b[4] == b[8]) return b[4];
  if (b[4] != 0 && b[2] == b[4] && b[4] == b[6]) return b[4];
  return 0;
}

bool BoardFull(const Board& board) {
  for (int v : board) {
    if (v == 0) return false;
  }
  return true;
}

std::vector<Board> ReachableBoards() {
  std::set<Board> seen;
  std::deque<Board> frontier;
  Board empty{};
  seen.insert(empty);
  frontier.push_back(empty);
  while (!frontier.empty()) {
    Board b = frontier.front();
    frontier.pop_front();
    if (LineScanWinner(b) != 0 || BoardFull(b)) continue;
    const int me = PlayerToMove(b);
    for (int i = 0; i < 9; ++i) {
      if (b[i] != 0) continue;
      Board next = b;
      next[i] = me;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

int MinimaxValue(const Board& board) { return Negamax(board, Memo()); }

std::vector<int> OptimalMoves(const Board& board) {
  const int me = PlayerToMove(board);
  const int best = MinimaxValue(board);
  std::vector<int> moves;
  for (int i = 0; i < 9; ++i) {
    if (board[i] != 0) continue;
    Board next = board;
    next[i] = me;
    if (-MinimaxValue(next) == best) moves.push_back(i);
  }
  return moves;
}

Action MinimaxAgent::SelectAction(const GameState& state, Rng& rng) {
  const std::vector<int> moves = OptimalMoves(ToBoard(state));
  std::uniform_int_distribution<size_t> pick(0, moves.size() - 1);
  return moves[pick(rng)];
}

Evaluation PerfectValueEvaluator::Evaluate(const GameState& state) const {
  const Board b = ToBoard(state);
  Evaluation e;
  e.policy.assign(9, 0.0);
  int empty = 0;
  for (int v : b) empty += v == 0;
  for (int i = 0; i < 9; ++i) {
    if (b[i] == 0) e.policy[i] = 1.0 / empty;
  }
  e.value = MinimaxValue(b);
  return e;
}

size_t BrutePuct(const std::vector<EdgeStats>& edges, double c_puct) {
  double total = 0.0;
  for (const EdgeStats& e : edges) total += e.visit_count;
  size_t best = 0;
  double best_score = 0.0;
  for (size_t i = 0; i < edges.size(); ++i) {
    const EdgeStats& e = edges[i];
    const double q = e.visit_count == 0 ? 0.0 : e.total_value / e.visit_count;
    const double u = c_puct * e.prior * std::sqrt(total) / (1.0 + e.visit_count);
    if (i == 0 || q + u > best_score) {
      best = i;
      best_score = q + u;
    }
  }
  return best;
}

int ConnectFourCell(const GameState& state, int row, int col) {
  const int bit = col * 7 + row;
  if ((state.pieces[0] >> bit) & 1) return 1;
  if ((state.pieces[1] >> bit) & 1) return 2;
  return 0;
}

int ConnectFourWinner(const GameState& state) {
  const int dirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 7; ++c) {
      const int owner = ConnectFourCell(state, r, c);
      if (owner == 0) continue;
      for (const auto& d : dirs) {
        int k = 1;
        while (k < 4) {
          const int rr = r + d[0] * k;
          const int cc = c + d[1] * k;
          if (rr < 0 || rr >= 6 || cc < 0 || cc >= 7) break;
          if (ConnectFourCell(state, rr, cc) != owner) break;
          ++k;
        }
        if (k == 4) return owner;
      }
    }
  }
  return 0;
}

}  // namespace goexploit::oracle
