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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "goexploit/eval.h"
#include "support/oracles.h"

namespace goexploit {
namespace {

namespace fs = std::filesystem;

const Game& Ttt() { return GetGame(GameId::kTicTacToe); }

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "goexploit_eval_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(AucTest, SumsTheCurve) {
  EXPECT_DOUBLE_EQ(ComputeAuc(std::vector<double>{}), 0.0);
  EXPECT_DOUBLE_EQ(ComputeAuc(std::vector<double>{0.5, 0.5, 1.0}), 2.0);
  std::vector<double> flat(600, 0.25);
  EXPECT_DOUBLE_EQ(ComputeAuc(flat), 150.0);
}

TEST(WindowedCurveTest, MatchWeightedWindowsCarryForward) {
  std::vector<EvalPoint> points = {
      {25, 2, 10, 0.4}, {50, 2, 30, 0.6}, {50, 6, 10, 1.0}};
  std::vector<double> c = WindowedCurve(points, 2, 110, 50);
  ASSERT_EQ(c.size(), 110u);
  EXPECT_EQ(c[0], 0.0);         // t = 1
  EXPECT_EQ(c[23], 0.0);        // t = 24
  EXPECT_DOUBLE_EQ(c[24], 0.4);   // t = 25
  EXPECT_DOUBLE_EQ(c[48], 0.4);   // t = 49
  EXPECT_DOUBLE_EQ(c[49], (0.4 * 10 + 0.6 * 30) / 40);  // t = 50
  EXPECT_DOUBLE_EQ(c[73], (0.4 * 10 + 0.6 * 30) / 40);  // t = 74
  EXPECT_DOUBLE_EQ(c[74], 0.6);   // t = 75: step 25 has left the window
  EXPECT_DOUBLE_EQ(c[99], 0.6);   // t = 100: window empty, carried
  EXPECT_DOUBLE_EQ(c[109], 0.6);
  std::vector<double> six = WindowedCurve(points, 6, 60, 50);
  EXPECT_DOUBLE_EQ(six[59], 1.0);
}

TEST(NormalCiTest, UsesSampleDeviation) {
  MeanCi ci = NormalCi(std::vector<double>{0.4, 0.5, 0.5, 0.6});
  const double sd = std::sqrt(0.02 / 3);
  EXPECT_DOUBLE_EQ(ci.mean, 0.5);
  EXPECT_NEAR(ci.high - ci.mean, 1.96 * sd / 2, 1e-15);
  EXPECT_NEAR(ci.mean - ci.low, 1.96 * sd / 2, 1e-15);
  MeanCi one = NormalCi(std::vector<double>{0.3});
  EXPECT_EQ(one.low, 0.3);
  EXPECT_EQ(one.high, 0.3);
}

TEST(MatchTest, MinimaxAgainstItselfAlwaysDraws) {
  oracle::MinimaxAgent a, b;
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    MatchResult m = PlaySeated(Ttt(), a, b, 1 + i % 2, rng);
    EXPECT_EQ(m.score_p1, 0.5);
    EXPECT_EQ(m.moves, 9);
  }
}

TEST(MatchTest, SeatAssignment) {
  oracle::MinimaxAgent perfect;
  RandomAgent random(Ttt());
  Rng rng(2);
  double score = 0.0;
  for (int i = 0; i < 100; ++i) {
    MatchResult m = PlaySeated(Ttt(), perfect, random, 1 + i % 2, rng);
    EXPECT_EQ(m.seat_a, 1 + i % 2);
    EXPECT_GE(m.score_a(), 0.5);  // perfect play never loses
    score += m.score_a();
  }
  EXPECT_GT(score / 100, 0.8);
}

TEST(TournamentTest, PlaysBothSeatsForEveryPairing) {
  std::vector<std::shared_ptr<Agent>> a = {std::make_shared<oracle::MinimaxAgent>(),
                                           std::make_shared<oracle::MinimaxAgent>()};
  std::vector<std::shared_ptr<Agent>> b = {std::make_shared<oracle::MinimaxAgent>(),
                                           std::make_shared<oracle::MinimaxAgent>()};
  TournamentResult r = Tournament(Ttt(), a, b, 3);
  EXPECT_EQ(r.games, 8);
  EXPECT_DOUBLE_EQ(r.win_rate_a, 0.5);

  std::vector<std::shared_ptr<Agent>> random = {
      std::make_shared<RandomAgent>(Ttt())};
  TournamentResult vs_random = Tournament(Ttt(), a, random, 4);
  EXPECT_EQ(vs_random.games, 4);
  TournamentResult reversed = Tournament(Ttt(), random, a, 4);
  EXPECT_EQ(reversed.games, 4);
  EXPECT_GE(vs_random.win_rate_a, 0.5);
  EXPECT_LE(reversed.win_rate_a, 0.5);
}

TEST(EvaluateAgentTest, MatchCountsAndSeeding) {
  oracle::MinimaxAgent perfect;
  std::vector<int> levels = {1, 3};
  auto results = EvaluateAgent(Ttt(), perfect, levels, 6, 20, 9);
  ASSERT_EQ(results.size(), 2u);
  for (const LevelResult& r : results) {
    EXPECT_EQ(r.matches, 6);
    EXPECT_EQ(r.wins + r.draws + r.losses, 6);
    EXPECT_EQ(r.losses, 0);
    EXPECT_GE(r.win_rate(), 0.5);
  }
  // A level's results do not depend on which other levels ran.
  std::vector<int> only = {3};
  auto alone = EvaluateAgent(Ttt(), perfect, only, 6, 20, 9);
  EXPECT_EQ(alone[0].wins, results[1].wins);
  EXPECT_EQ(alone[0].draws, results[1].draws);

  EXPECT_THROW(EvaluateAgent(Ttt(), perfect, levels, 5, 20, 9), ConfigError);
  EXPECT_TRUE(EvaluateAgent(Ttt(), perfect, levels, 0, 20, 9).empty());
}

TEST(UniqueStatesTest, CountsDistinctKeysPerDepth) {
  std::istringstream log(
      R"({"step":1,"start_ply":0,"keys":["a","b","c"]})" "\n"
      R"({"step":1,"start_ply":0,"keys":["a","x"]})" "\n"
      R"({"step":2,"start_ply":1,"keys":["b","y","z"]})" "\n"
      "\n"
      R"({"step":3,"start_ply":2,"keys":["q"]})" "\n");
  std::vector<size_t> all = UniqueStatesByDepth(log);
  EXPECT_EQ(all, (std::vector<size_t>{1, 2, 3, 1}));

  std::istringstream again(
      R"({"step":1,"start_ply":0,"keys":["a","b","c"]})" "\n"
      R"({"step":2,"start_ply":1,"keys":["b","y","z"]})" "\n"
      R"({"step":3,"start_ply":2,"keys":["q"]})" "\n");
  EXPECT_EQ(UniqueStatesByDepth(again, 1), (std::vector<size_t>{1, 1, 1}));

  std::istringstream bad("{\"keys\": 3}\n");
  EXPECT_THROW(UniqueStatesByDepth(bad), IoError);
  EXPECT_THROW(UniqueStatesByDepthFile("/nonexistent/log.jsonl"), IoError);
}

TEST(ValueLossTest, PerfectValuesUnderOptimalPlayGiveZero) {
  oracle::PerfectValueEvaluator perfect;
  SelfplayConfig play;
  play.k = 0;
  play.search.iterations = 400;
  play.search.use_root_noise = false;
  ValueLossReport visited = VisitedValueLoss(Ttt(), perfect, play, 5, 1);
  EXPECT_EQ(visited.mode, "visited");
  EXPECT_EQ(visited.n_states, 45u);  // every optimal game is a 9-move draw
  EXPECT_EQ(visited.mse, 0.0);
}

TEST(ValueLossTest, ConstantEvaluatorMatchesOutcomeArithmetic) {
  // Value 0 everywhere: the loss is the share of states from decisive games.
  UniformEvaluator zero(Ttt());
  SelfplayConfig play;
  play.k = 9;
  play.search.iterations = 4;
  ValueLossReport r = VisitedValueLoss(Ttt(), zero, play, 40, 2);
  EXPECT_GT(r.n_states, 40u * 5 - 1);
  EXPECT_GT(r.mse, 0.0);
  EXPECT_LE(r.mse, 1.0);
  const double decisive_states = r.mse * r.n_states;
  EXPECT_NEAR(decisive_states, std::round(decisive_states), 1e-9);
}

TEST(ValueLossTest, SearchModeWithPerfectValues) {
  oracle::PerfectValueEvaluator perfect;
  SelfplayConfig play;
  play.k = 2;
  play.search.iterations = 300;
  ValueLossReport r = SearchValueLoss(Ttt(), perfect, play, 2, 60, 3);
  EXPECT_EQ(r.mode, "search");
  EXPECT_GT(r.n_states, 0u);
  EXPECT_LE(r.n_states, 60u);
  EXPECT_EQ(r.mse, 0.0);
}

TEST(ValueLossTest, RejectsNoGames) {
  UniformEvaluator zero(Ttt());
  SelfplayConfig play;
  EXPECT_THROW(VisitedValueLoss(Ttt(), zero, play, 0, 1), ConfigError);
  EXPECT_THROW(SearchValueLoss(Ttt(), zero, play, 0, 0, 1), ConfigError);
}

TEST(EvalCsvTest, RoundTrips) {
  fs::path dir = FreshDir("csv");
  std::vector<EvalPoint> points = {{0, 2, 20, 0.125}, {25, 6, 20, 0.55}};
  WriteEvalCsv((dir / "eval.csv").string(), points);
  auto back = ReadEvalCsv((dir / "eval.csv").string());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].step, 25);
  EXPECT_EQ(back[1].level, 6);
  EXPECT_EQ(back[1].matches, 20);
  EXPECT_EQ(back[1].win_rate, 0.55);
  EXPECT_THROW(ReadEvalCsv((dir / "missing.csv").string()), IoError);
}

TEST(EmitCurvesTest, AggregatesRunsWithConfidenceIntervals) {
  std::vector<std::string> runs;
  const double rates[] = {0.4, 0.5, 0.5, 0.6};
  for (int i = 0; i < 4; ++i) {
    fs::path dir = FreshDir("curves_run" + std::to_string(i));
    std::ofstream(dir / "manifest.json")
        << R"({"config": {"total_steps": 4}})";
    std::vector<EvalPoint> points = {{2, 2, 10, rates[i]}};
    WriteEvalCsv((dir / "eval.csv").string(), points);
    runs.push_back(dir.string());
  }
  fs::path out = FreshDir("curves_out");
  EmitCurves(runs, out.string(), 50);

  auto curves = ReadCsv(out / "curves.csv");
  ASSERT_EQ(curves.size(), 5u);
  EXPECT_EQ(curves[0][0], "step");
  EXPECT_DOUBLE_EQ(std::stod(curves[1][2]), 0.0);  // t = 1
  EXPECT_DOUBLE_EQ(std::stod(curves[2][2]), 0.5);  // t = 2
  const double half = 1.96 * std::sqrt(0.02 / 3) / 2;
  EXPECT_NEAR(std::stod(curves[4][3]), 0.5 - half, 1e-9);  // 10 significant digits

  auto auc = ReadCsv(out / "auc.csv");
  ASSERT_EQ(auc.size(), 2u);
  EXPECT_EQ(auc[1][0], "2");
  EXPECT_NEAR(std::stod(auc[1][1]), 1.5, 1e-12);  // 3 steps at 0.5
  EXPECT_NEAR(std::stod(auc[1][3]) - 1.5, 3 * half, 1e-9);
  EXPECT_EQ(auc[1][4], "4");

  EXPECT_THROW(EmitCurves({FreshDir("curves_empty").string()}, out.string(), 50),
               IoError);
}

TEST(EvaluateCheckpointTest, RandomWeightsLoseToTheStrongSolver) {
  Network net({GameId::kConnectFour, {32}}, 13);
  Rng rng(14);
  std::normal_distribution<double> n(0.0, 0.3);
  for (double& p : net.mutable_params()) p += n(rng);
  const fs::path path = FreshDir("random_weights") / "random.bin";
  net.Save(path.string());
  // One agent iteration per move, so level 1000 is 1000 solver iterations.
  const std::vector<int> levels = {1000};
  auto r = EvaluateCheckpoint(path.string(), levels, 100, 1, 15);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].matches, 100);
  EXPECT_LT(r[0].win_rate(), 0.5);
}

TEST(AucTest, ThreePointCurve) {
  EXPECT_NEAR(ComputeAuc(std::vector<double>{0.2, 0.4, 0.6}), 1.2, 1e-12);
}

}  // namespace
}  // namespace goexploit
