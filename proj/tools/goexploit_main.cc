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

// goexploit: train, evaluate, tournament, stats, emit-curves, validate-config.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "goexploit/goexploit_c.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

// Thrown after a failed library call; main prints it as the one-line
// diagnostic.
struct Failure {
  std::string message;
};

void Check(gx_status status, const std::string& what) {
  if (status != GX_OK) {
    throw Failure{what + ": " + gx_status_name(status) + ": " +
                  gx_last_error()};
  }
}

struct ConfigDeleter {
  void operator()(gx_config* c) const { gx_config_free(c); }
};
using ConfigPtr = std::unique_ptr<gx_config, ConfigDeleter>;

std::string TakeString(char* s) {
  std::string out(s);
  gx_string_free(s);
  return out;
}

struct ConfigFlags {
  std::string config_path;
  std::string variant;
  std::vector<std::string> sets;
  std::optional<uint64_t> seed;
  std::optional<int> actors;
  std::optional<int> archive_actors;
  bool deterministic = false;
};

void AddConfigFlags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON run config or run manifest");
  cmd->add_option("--variant", f.variant,
                  "alphazero, geve, gevc, gesr, gesc, akti, akb, aktib, "
                  "gesckb, gesckpcr, gesckfp, gesc3k");
  cmd->add_option("--set", f.sets, "override, e.g. --set search.iterations=50")
      ->take_all();
  cmd->add_option("--seed", f.seed, "run seed");
  cmd->add_option("--actors", f.actors, "training actors");
  cmd->add_option("--archive-actors", f.archive_actors, "archive actors");
  cmd->add_flag("--deterministic", f.deterministic,
                "single-threaded reproducible schedule");
}

ConfigPtr ResolveConfig(const ConfigFlags& f) {
  gx_config* raw = nullptr;
  Check(gx_config_load(f.config_path.empty() ? nullptr : f.config_path.c_str(),
                       f.variant.empty() ? nullptr : f.variant.c_str(), &raw),
        "config");
  ConfigPtr cfg(raw);
  std::vector<std::string> sets;
  if (f.seed) sets.push_back("seed=" + std::to_string(*f.seed));
  if (f.actors) sets.push_back("actors.training=" + std::to_string(*f.actors));
  if (f.archive_actors) {
    sets.push_back("actors.archive=" + std::to_string(*f.archive_actors));
  }
  if (f.deterministic) sets.push_back("actors.deterministic=true");
  sets.insert(sets.end(), f.sets.begin(), f.sets.end());
  for (const std::string& s : sets) Check(gx_config_set(cfg.get(), s.c_str()), s);
  return cfg;
}

nlohmann::json ConfigJson(const gx_config* cfg) {
  char* text = nullptr;
  Check(gx_config_to_json(cfg, &text), "config");
  return nlohmann::json::parse(TakeString(text));
}

std::string DefaultOutRoot() {
  const char* root = std::getenv("GOEXPLOIT_OUT_ROOT");
  return root != nullptr && *root != '\0' ? root : "runs";
}

std::vector<int> ParseLevels(const std::string& text) {
  std::vector<int> levels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      const int level = std::stoi(item, &used);
      if (used != item.size() || level < 1) throw std::invalid_argument(item);
      levels.push_back(level);
    } catch (const std::exception&) {
      throw Failure{"--levels: expected positive integers, got '" + item +
                    "'"};
    }
  }
  if (levels.empty()) throw Failure{"--levels: empty"};
  return levels;
}

void PrintStep(const gx_step_report* r, void*) {
  std::printf(
      "step %d  loss %.4f (value %.4f policy %.4f)  samples %llu  "
      "trajectories %llu  archive %llu/%llu\n",
      r->step, r->loss_total, r->loss_value, r->loss_policy,
      static_cast<unsigned long long>(r->samples),
      static_cast<unsigned long long>(r->trajectories),
      static_cast<unsigned long long>(r->unique_archive_keys),
      static_cast<unsigned long long>(r->archive_size));
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-play training with archive-based search control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gx_version()));

  ConfigFlags train_flags;
  std::string train_out;
  bool quiet = false;
  CLI::App* train = app.add_subcommand("train", "run a training job");
  AddConfigFlags(train, train_flags);
  train->add_option("--out", train_out,
                    "run directory (default $GOEXPLOIT_OUT_ROOT/<variant>_s<seed>)");
  train->add_flag("--quiet", quiet, "no per-step output");

  ConfigFlags validate_flags;
  CLI::App* validate =
      app.add_subcommand("validate-config", "resolve and check a config");
  AddConfigFlags(validate, validate_flags);

  std::string eval_target;
  std::string eval_levels = "10";
  int eval_matches = 20;
  int eval_iterations = 0;
  uint64_t eval_seed = 0;
  std::string eval_out;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "play a checkpoint (or every checkpoint of a run) against "
                  "the reference solver");
  evaluate->add_option("--checkpoint", eval_target,
                       "checkpoint file or run directory")
      ->required();
  evaluate->add_option("--levels", eval_levels, "comma-separated multipliers");
  evaluate->add_option("--matches", eval_matches, "matches per level (even)");
  evaluate->add_option("--iterations", eval_iterations,
                       "agent search iterations (default: the run's)");
  evaluate->add_option("--seed", eval_seed);
  evaluate->add_option("--out", eval_out, "CSV path");

  std::vector<std::string> side_a;
  std::vector<std::string> side_b;
  std::string label_a = "a";
  std::string label_b = "b";
  int tour_step = 0;
  int tour_iterations = 100;
  uint64_t tour_seed = 0;
  CLI::App* tournament =
      app.add_subcommand("tournament", "checkpoints of A against those of B");
  tournament->add_option("--a", side_a, "side A checkpoints")->required();
  tournament->add_option("--b", side_b, "side B checkpoints")->required();
  tournament->add_option("--label-a", label_a);
  tournament->add_option("--label-b", label_b);
  tournament->add_option("--step", tour_step, "step reported in the row");
  tournament->add_option("--iterations", tour_iterations);
  tournament->add_option("--seed", tour_seed);

  std::string stats_run;
  std::string stats_out;
  int stats_games = 0;
  std::string stats_mode = "visited";
  uint64_t stats_seed = 0;
  CLI::App* stats = app.add_subcommand(
      "stats", "state coverage, trajectories per step and value loss");
  stats->add_option("run", stats_run, "run directory")->required();
  stats->add_option("--out", stats_out, "output directory (default run/stats)");
  stats->add_option("--matches", stats_games,
                    "self-play games for the value-loss report (0 = skip)");
  stats->add_option("--mode", stats_mode, "visited or search");
  stats->add_option("--seed", stats_seed);

  std::vector<std::string> curve_runs;
  std::string curve_out = "curves";
  int curve_window = 50;
  CLI::App* curves =
      app.add_subcommand("emit-curves", "aggregate eval.csv across runs");
  curves->add_option("runs", curve_runs, "run directories")->required();
  curves->add_option("--out", curve_out);
  curves->add_option("--window", curve_window);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ConfigPtr cfg = ResolveConfig(train_flags);
      const nlohmann::json j = ConfigJson(cfg.get());
      if (train_out.empty()) {
        train_out = (fs::path(DefaultOutRoot()) /
                     (j["variant"].get<std::string>() + "_s" +
                      std::to_string(j["seed"].get<uint64_t>())))
                        .string();
      }
      Check(gx_train(cfg.get(), train_out.c_str(), quiet ? nullptr : PrintStep,
                     nullptr),
            "train");
      std::printf("%s\n", (fs::path(train_out) / "manifest.json").c_str());
    } else if (*validate) {
      ConfigPtr cfg = ResolveConfig(validate_flags);
      std::printf("%s\n", ConfigJson(cfg.get()).dump(2).c_str());
    } else if (*evaluate) {
      const std::vector<int> levels = ParseLevels(eval_levels);
      const bool is_run = fs::is_directory(eval_target);
      int iterations = eval_iterations;
      if (!is_run && iterations <= 0) iterations = 100;
      Check(gx_evaluate(eval_target.c_str(), levels.data(), levels.size(),
                        eval_matches, iterations, eval_seed,
                        eval_out.empty() ? nullptr : eval_out.c_str()),
            "evaluate");
      if (is_run) {
        std::printf("%s\n",
                    (eval_out.empty()
                         ? (fs::path(eval_target) / "eval.csv").string()
                         : eval_out)
                        .c_str());
      }
    } else if (*tournament) {
      std::vector<const char*> a;
      std::vector<const char*> b;
      for (const std::string& s : side_a) a.push_back(s.c_str());
      for (const std::string& s : side_b) b.push_back(s.c_str());
      double win_rate = 0.0;
      int games = 0;
      Check(gx_tournament(a.data(), a.size(), b.data(), b.size(),
                          tour_iterations, tour_seed, &win_rate, &games),
            "tournament");
      std::printf("algo_a,algo_b,step,win_rate,games\n%s,%s,%d,%.6f,%d\n",
                  label_a.c_str(), label_b.c_str(), tour_step, win_rate,
                  games);
    } else if (*stats) {
      if (stats_out.empty()) {
        stats_out = (fs::path(stats_run) / "stats").string();
      }
      Check(gx_stats(stats_run.c_str(), stats_out.c_str()), "stats");
      if (stats_games > 0) {
        std::ifstream in(fs::path(stats_run) / "manifest.json");
        const nlohmann::json m = nlohmann::json::parse(in, nullptr, false);
        if (m.is_discarded() || m["checkpoints"].empty()) {
          throw Failure{"stats: run has no checkpoints"};
        }
        const nlohmann::json& last = m["checkpoints"].back();
        const std::string ckpt =
            (fs::path(stats_run) / last["path"].get<std::string>()).string();
        double mse = 0.0;
        uint64_t n_states = 0;
        Check(gx_value_loss(ckpt.c_str(), stats_run.c_str(), stats_mode.c_str(),
                            stats_games, 2000, stats_seed, &mse, &n_states),
              "value loss");
        nlohmann::ordered_json report;
        report["algorithm"] = m["config"]["variant"];
        report["step"] = last["step"];
        report["mode"] = stats_mode;
        report["mse"] = mse;
        report["n_states"] = n_states;
        std::ofstream out(fs::path(stats_out) / "value_loss.json");
        out << report.dump(2) << '\n';
      }
      std::ifstream summary(fs::path(stats_out) / "summary.json");
      std::cout << summary.rdbuf();
    } else if (*curves) {
      std::vector<const char*> runs;
      for (const std::string& r : curve_runs) runs.push_back(r.c_str());
      Check(gx_emit_curves(runs.data(), runs.size(), curve_window,
                           curve_out.c_str()),
            "emit-curves");
      std::printf("%s\n", curve_out.c_str());
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "goexploit: %s\n", f.message.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "goexploit: %s\n", e.what());
    return 1;
  }
  return 0;
}
