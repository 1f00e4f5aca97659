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

#include <deque>
#include <map>
#include <sstream>
#include <thread>

#include "goexploit/archive.h"
#include "support/oracles.h"

namespace goexploit {
namespace {

// Distinct nonterminal Tic-Tac-Toe positions, the empty board first.
std::vector<GameState> DistinctStates(size_t n) {
  std::vector<GameState> out;
  for (const oracle::Board& b : oracle::ReachableBoards()) {
    if (oracle::LineScanWinner(b) != 0 || oracle::BoardFull(b)) continue;
    out.push_back(oracle::FromBoard(b));
    if (out.size() == n) break;
  }
  return out;
}

size_t IndexOf(const std::vector<GameState>& states, const GameState& s) {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == s) return i;
  return states.size();
}

const Game& Ttt() { return GetGame(GameId::kTicTacToe); }

TEST(ArchiveTest, TypeNames) {
  EXPECT_EQ(ParseArchiveType("circular"), ArchiveType::kCircular);
  EXPECT_EQ(ParseArchiveType("reservoir"), ArchiveType::kReservoir);
  EXPECT_EQ(ParseArchiveType("expanding"), ArchiveType::kExpanding);
  EXPECT_THROW(ParseArchiveType("ring"), ConfigError);
  EXPECT_EQ(ArchiveTypeName(ArchiveType::kReservoir), "reservoir");
}

TEST(ArchiveTest, StartsWithInitialState) {
  for (ArchiveType t : {ArchiveType::kExpanding, ArchiveType::kCircular,
                        ArchiveType::kReservoir}) {
    Archive a(Ttt(), t, 10, Ttt().InitialState(), 1);
    EXPECT_EQ(a.size(), 1u);
    EXPECT_EQ(a.n_offered(), 1u);
    Rng rng(1);
    EXPECT_EQ(a.Sample(rng), Ttt().InitialState());
  }
  EXPECT_THROW(Archive(Ttt(), ArchiveType::kCircular, 0, Ttt().InitialState(), 1),
               ConfigError);
}

TEST(ArchiveTest, ExpandingKeepsEverything) {
  auto states = DistinctStates(50);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  a.Update(std::span(states).subspan(1, 20));
  a.Update(std::span(states).subspan(1, 20));
  EXPECT_EQ(a.size(), 41u);
  ArchiveStats st = a.Stats();
  EXPECT_EQ(st.unique_keys, 21u);
  EXPECT_EQ(st.n_offered, 41u);
}

TEST(ArchiveTest, CircularHoldsExactlyTheLastOffers) {
  auto states = DistinctStates(300);
  Rng rng(3);
  for (size_t capacity : {1u, 7u, 64u}) {
    Archive a(Ttt(), ArchiveType::kCircular, capacity, states[0], 2);
    std::deque<size_t> reference = {0};
    size_t ops = 0;
    std::uniform_int_distribution<size_t> len(0, 12);
    std::uniform_int_distribution<size_t> pick(0, states.size() - 1);
    while (ops < 100000) {
      std::vector<GameState> batch;
      for (size_t n = len(rng); n > 0; --n) {
        size_t i = pick(rng);
        batch.push_back(states[i]);
        reference.push_back(i);
        if (reference.size() > capacity) reference.pop_front();
      }
      ops += batch.size();
      a.Update(batch);
      if (ops % 97 == 0 || ops >= 100000) {
        std::vector<GameState> items = a.Items();
        ASSERT_EQ(items.size(), reference.size());
        for (size_t k = 0; k < items.size(); ++k)
          ASSERT_EQ(items[k], states[reference[k]]);
      }
    }
  }
}

TEST(ArchiveTest, ReservoirIsUniformOverTheOfferStream) {
  // Stream: the seed state plus 19 offers; capacity 5. Each of the 20 stream
  // items should survive with probability 5/20.
  auto states = DistinctStates(20);
  const int trials = 2000;
  std::vector<int> survived(20, 0);
  for (int t = 0; t < trials; ++t) {
    Archive a(Ttt(), ArchiveType::kReservoir, 5, states[0], 1000 + t);
    for (size_t i = 1; i < states.size(); ++i) a.Update(std::span(&states[i], 1));
    ASSERT_EQ(a.size(), 5u);
    ASSERT_EQ(a.n_offered(), 20u);
    for (const GameState& s : a.Items()) ++survived[IndexOf(states, s)];
  }
  const double expected = trials * 5.0 / 20.0;
  double chi2 = 0.0;
  for (int c : survived) chi2 += (c - expected) * (c - expected) / expected;
  // 19 degrees of freedom; 43.8 is the 0.001 critical value.
  EXPECT_LT(chi2, 43.8);
}

TEST(ArchiveTest, TerminalStateRejectedWithoutChanges) {
  auto states = DistinctStates(5);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  GameState won = oracle::FromBoard({1, 1, 1, 2, 2, 0, 0, 0, 0});
  std::vector<GameState> batch = {states[1], won};
  EXPECT_THROW(a.Update(batch), ContractViolation);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.n_offered(), 1u);
}

TEST(ArchiveTest, SampleIsUniformAndDoesNotMutate) {
  auto states = DistinctStates(4);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  a.Update(std::span(states).subspan(1, 3));
  Rng rng(5);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 40000; ++i) ++counts[IndexOf(states, a.Sample(rng))];
  for (int c : counts) EXPECT_NEAR(c / 40000.0, 0.25, 0.01);
  EXPECT_EQ(a.size(), 4u);
}

TEST(ArchiveTest, CountsUpdatesPerWriterUnderConcurrency) {
  auto states = DistinctStates(30);
  Archive a(Ttt(), ArchiveType::kCircular, 100, states[0], 1);
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      Rng rng(w);
      for (int i = 0; i < 500; ++i) {
        if (w == 0) {
          a.Update(std::span(states).subspan(1 + i % 20, 3),
                   ArchiveWriter::kArchiveActor);
        } else {
          a.Sample(rng);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(a.UpdatesBy(ArchiveWriter::kArchiveActor), 500u);
  EXPECT_EQ(a.UpdatesBy(ArchiveWriter::kLearner), 0u);
  EXPECT_EQ(a.n_offered(), 1501u);
}

TEST(ArchiveTest, DumpKeysCountsDuplicates) {
  auto states = DistinctStates(3);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  std::vector<GameState> batch = {states[1], states[1], states[2]};
  a.Update(batch);
  std::ostringstream out;
  a.DumpKeys(out);
  std::map<std::string, int> parsed;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    parsed[line.substr(0, comma)] = std::stoi(line.substr(comma + 1));
  }
  EXPECT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[KeyOf(states[1]).ToString()], 2);
  EXPECT_EQ(parsed[KeyOf(states[0]).ToString()], 1);
}

TEST(ArchiveTest, SamplingCountsDuplicates) {
  auto states = DistinctStates(2);
  const GameState& x = states[0];
  const GameState& y = states[1];
  Archive a(Ttt(), ArchiveType::kExpanding, 0, x, 1);
  const std::vector<GameState> offers = {x, y};
  a.Update(offers);
  Rng rng(6);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += a.Sample(rng) == x;
  EXPECT_NEAR(hits / static_cast<double>(n), 2.0 / 3.0, 0.01);
}

TEST(ArchiveTest, SameSeedSameDraws) {
  auto states = DistinctStates(10);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  a.Update(std::span(states).subspan(1));
  Rng r1(9), r2(9);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.Sample(r1), a.Sample(r2));
}

TEST(ArchiveTest, CircularOfThreeEvictsOldestFirst) {
  auto states = DistinctStates(5);
  Archive a(Ttt(), ArchiveType::kCircular, 3, states[0], 1);
  a.Update(std::span(states).subspan(1, 4));
  const std::vector<GameState> want = {states[2], states[3], states[4]};
  EXPECT_EQ(a.Items(), want);
}

TEST(ArchiveTest, ExpandingGrowsByEveryOffer) {
  auto states = DistinctStates(1001);
  Archive a(Ttt(), ArchiveType::kExpanding, 0, states[0], 1);
  a.Update(std::span(states).subspan(1));
  EXPECT_EQ(a.size(), 1001u);
  EXPECT_LE(a.Stats().unique_keys, a.size());
}

}  // namespace
}  // namespace goexploit
