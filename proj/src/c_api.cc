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

#include "goexploit/goexploit_c.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goexploit/config.h"
#include "goexploit/eval.h"
#include "goexploit/learner.h"
#include "goexploit/mcts.h"
#include "goexploit/model.h"
#include "goexploit/solver.h"
#include "json.hpp"

struct gx_config {
  std::string file_text;
  std::optional<std::string> variant;
  std::vector<std::string> overrides;
  goexploit::RunConfig resolved;
};

struct gx_game_state {
  const goexploit::Game* game;
  goexploit::GameState state;
};

struct gx_network {
  std::shared_ptr<const goexploit::Network> net;
};

namespace {

namespace fs = std::filesystem;
using namespace goexploit;

thread_local std::string last_error;

gx_status Fail(gx_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
gx_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return GX_OK;
  } catch (const ConfigError& e) {
    return Fail(GX_ERR_CONFIG, e.what());
  } catch (const ContractViolation& e) {
    return Fail(GX_ERR_CONTRACT, e.what());
  } catch (const IoError& e) {
    return Fail(GX_ERR_IO, e.what());
  } catch (const TrainingError& e) {
    return Fail(GX_ERR_TRAINING, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(GX_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(GX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(GX_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(GX_ERR_INTERNAL, "unknown error");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define GX_CHECK_ARG(cond)                                  \
  do {                                                      \
    if (!(cond)) {                                          \
      return Fail(GX_ERR_ARGUMENT, "invalid argument: " #cond); \
    }                                                       \
  } while (0)

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void EvaluateRun(const std::string& run_dir, std::span<const int> levels,
                 int n_matches, int iterations, uint64_t seed,
                 const char* out_csv) {
  const RunManifest m = ReadManifest(run_dir);
  const int iters =
      iterations > 0 ? iterations : m.config.selfplay.search.iterations;
  std::vector<EvalPoint> points;
  for (const CheckpointEntry& c : m.checkpoints) {
    const std::string path = (fs::path(m.run_dir) / c.path).string();
    for (const LevelResult& r :
         EvaluateCheckpoint(path, levels, n_matches, iters,
                            DeriveSeed(seed, c.step))) {
      points.push_back({c.step, r.level, r.matches, r.win_rate()});
    }
  }
  WriteEvalCsv(out_csv != nullptr
                   ? std::string(out_csv)
                   : (fs::path(m.run_dir) / "eval.csv").string(),
               points);
}

}  // namespace

extern "C" {

const char* gx_last_error(void) { return last_error.c_str(); }

const char* gx_version(void) { return "0.1.0"; }

const char* gx_status_name(gx_status status) {
  switch (status) {
    case GX_OK:
      return "ok";
    case GX_ERR_ARGUMENT:
      return "invalid argument";
    case GX_ERR_CONFIG:
      return "configuration error";
    case GX_ERR_CONTRACT:
      return "contract violation";
    case GX_ERR_IO:
      return "i/o error";
    case GX_ERR_TRAINING:
      return "training error";
    case GX_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void gx_string_free(char* s) { std::free(s); }

gx_status gx_config_load(const char* path, const char* variant,
                         gx_config** out) {
  GX_CHECK_ARG(out != nullptr);
  *out = nullptr;
  return Guard([&] {
    auto cfg = std::make_unique<gx_config>();
    if (path != nullptr) cfg->file_text = ReadTextFile(path);
    if (variant != nullptr) cfg->variant = std::string(variant);
    try {
      cfg->resolved = ParseRunConfig(cfg->file_text, {}, cfg->variant);
    } catch (const ConfigError& e) {
      if (path == nullptr) throw;
      throw ConfigError(std::string(path) + ": " + e.what());
    }
    *out = cfg.release();
  });
}

gx_status gx_config_set(gx_config* cfg, const char* assignment) {
  GX_CHECK_ARG(cfg != nullptr && assignment != nullptr);
  return Guard([&] {
    std::vector<std::string> overrides = cfg->overrides;
    overrides.emplace_back(assignment);
    cfg->resolved = ParseRunConfig(cfg->file_text, overrides, cfg->variant);
    cfg->overrides = std::move(overrides);
  });
}

gx_status gx_config_to_json(const gx_config* cfg, char** out_json) {
  GX_CHECK_ARG(cfg != nullptr && out_json != nullptr);
  return Guard([&] { *out_json = CopyString(RunConfigToJson(cfg->resolved)); });
}

void gx_config_free(gx_config* cfg) { delete cfg; }

gx_status gx_train(const gx_config* cfg, const char* out_dir,
                   gx_step_callback callback, void* user) {
  GX_CHECK_ARG(cfg != nullptr && out_dir != nullptr);
  return Guard([&] {
    TrainingRun run(cfg->resolved, out_dir);
    if (callback != nullptr) {
      run.set_step_callback([&](const StepReport& r) {
        gx_step_report c{r.step,
                         r.loss.total(),
                         r.loss.value,
                         r.loss.policy,
                         r.samples,
                         r.trajectories,
                         r.archive_size,
                         r.unique_archive_keys};
        callback(&c, user);
      });
    }
    run.Run();
  });
}

gx_status gx_evaluate(const char* target, const int* levels, size_t n_levels,
                      int n_matches, int iterations, uint64_t seed,
                      const char* out_csv) {
  GX_CHECK_ARG(target != nullptr && (levels != nullptr || n_levels == 0));
  return Guard([&] {
    std::span<const int> lv(levels, n_levels);
    if (fs::is_directory(target)) {
      EvaluateRun(target, lv, n_matches, iterations, seed, out_csv);
      return;
    }
    if (iterations <= 0) throw ConfigError("iterations: must be >= 1");
    const std::vector<LevelResult> results =
        EvaluateCheckpoint(target, lv, n_matches, iterations, seed);
    const std::string path =
        out_csv != nullptr ? std::string(out_csv) : std::string();
    std::ofstream file;
    if (!path.empty()) {
      file.open(path, std::ios::trunc);
      if (!file) throw IoError(path + ": cannot write");
    }
    std::ostream& out = path.empty() ? static_cast<std::ostream&>(std::cout)
                                     : static_cast<std::ostream&>(file);
    out << "level,matches,wins,draws,losses,win_rate\n";
    for (const LevelResult& r : results) {
      out << r.level << ',' << r.matches << ',' << r.wins << ',' << r.draws
          << ',' << r.losses << ',' << Fmt(r.win_rate()) << '\n';
    }
  });
}

gx_status gx_tournament(const char* const* side_a, size_t n_a,
                        const char* const* side_b, size_t n_b, int iterations,
                        uint64_t seed, double* win_rate_a, int* games) {
  GX_CHECK_ARG(side_a != nullptr && side_b != nullptr && win_rate_a != nullptr);
  return Guard([&] {
    if (iterations <= 0) throw ConfigError("iterations: must be >= 1");
    std::vector<std::string> a(side_a, side_a + n_a);
    std::vector<std::string> b(side_b, side_b + n_b);
    const TournamentResult r = TournamentFromCheckpoints(a, b, iterations, seed);
    *win_rate_a = r.win_rate_a;
    if (games != nullptr) *games = r.games;
  });
}

gx_status gx_stats(const char* run_dir, const char* out_dir) {
  GX_CHECK_ARG(run_dir != nullptr && out_dir != nullptr);
  return Guard([&] {
    const RunSummary s = SummarizeRun(run_dir);
    fs::create_directories(out_dir);
    std::ofstream depth(fs::path(out_dir) / "depth.csv", std::ios::trunc);
    if (!depth) throw IoError(std::string(out_dir) + ": cannot write");
    depth << "depth,unique_states\n";
    for (size_t d = 0; d < s.unique_by_depth.size(); ++d) {
      depth << d << ',' << s.unique_by_depth[d] << '\n';
    }
    nlohmann::ordered_json j;
    j["run"] = run_dir;
    j["steps"] = s.steps;
    j["trajectories"] = s.trajectories;
    j["trajectories_per_step"] = s.trajectories_per_step;
    j["unique_beyond_k"] = s.unique_beyond_k;
    size_t total = 0;
    for (size_t c : s.unique_by_depth) total += c;
    j["unique_states"] = total;
    std::ofstream summary(fs::path(out_dir) / "summary.json", std::ios::trunc);
    summary << j.dump(2) << '\n';
  });
}

gx_status gx_value_loss(const char* checkpoint, const char* run_dir,
                        const char* mode, int n_games, size_t max_states,
                        uint64_t seed, double* mse, uint64_t* n_states) {
  GX_CHECK_ARG(checkpoint != nullptr && mode != nullptr && mse != nullptr);
  return Guard([&] {
    auto net = std::make_shared<const Network>(Network::Load(checkpoint));
    SelfplayConfig play = DefaultRunConfig(Variant::kAlphaZero).selfplay;
    if (run_dir != nullptr) play = ReadManifest(run_dir).config.selfplay;
    NetworkEvaluator evaluator(net);
    ValueLossReport r;
    const std::string m(mode);
    if (m == "visited") {
      r = VisitedValueLoss(net->game(), evaluator, play, n_games, seed);
    } else if (m == "search") {
      r = SearchValueLoss(net->game(), evaluator, play, n_games, max_states,
                          seed);
    } else {
      throw ConfigError("mode: expected visited or search, got '" + m + "'");
    }
    *mse = r.mse;
    if (n_states != nullptr) *n_states = r.n_states;
  });
}

gx_status gx_emit_curves(const char* const* run_dirs, size_t n_runs,
                         int window, const char* out_dir) {
  GX_CHECK_ARG(run_dirs != nullptr && out_dir != nullptr);
  return Guard([&] {
    if (window < 1) throw ConfigError("window: must be >= 1");
    EmitCurves(std::vector<std::string>(run_dirs, run_dirs + n_runs), out_dir,
               window);
  });
}

gx_status gx_state_initial(const char* game, gx_game_state** out) {
  GX_CHECK_ARG(game != nullptr && out != nullptr);
  *out = nullptr;
  return Guard([&] {
    const Game& g = GetGame(std::string_view(game));
    *out = new gx_game_state{&g, g.InitialState()};
  });
}

gx_status gx_state_clone(const gx_game_state* s, gx_game_state** out) {
  GX_CHECK_ARG(s != nullptr && out != nullptr);
  return Guard([&] { *out = new gx_game_state(*s); });
}

gx_status gx_state_apply(gx_game_state* s, int action) {
  GX_CHECK_ARG(s != nullptr);
  return Guard([&] { s->state = s->game->ApplyAction(s->state, action); });
}

gx_status gx_state_legal_actions(const gx_game_state* s, int* actions,
                                 size_t capacity, size_t* count) {
  GX_CHECK_ARG(s != nullptr && count != nullptr);
  return Guard([&] {
    std::vector<Action> legal;
    if (!s->game->IsTerminal(s->state)) legal = s->game->LegalActions(s->state);
    *count = legal.size();
    if (actions == nullptr) return;
    for (size_t i = 0; i < legal.size() && i < capacity; ++i) {
      actions[i] = legal[i];
    }
  });
}

gx_status gx_state_outcome(const gx_game_state* s, int* terminal, int* value) {
  GX_CHECK_ARG(s != nullptr && terminal != nullptr);
  return Guard([&] {
    auto outcome = s->game->TerminalOutcome(s->state);
    *terminal = outcome ? 1 : 0;
    if (value != nullptr) *value = outcome ? outcome->value : 0;
  });
}

gx_status gx_state_to_move(const gx_game_state* s, int* player) {
  GX_CHECK_ARG(s != nullptr && player != nullptr);
  *player = s->state.to_move;
  return GX_OK;
}

gx_status gx_state_key(const gx_game_state* s, char** out) {
  GX_CHECK_ARG(s != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(KeyOf(s->state).ToString()); });
}

gx_status gx_state_render(const gx_game_state* s, char** out) {
  GX_CHECK_ARG(s != nullptr && out != nullptr);
  return Guard([&] { *out = CopyString(s->game->Render(s->state)); });
}

void gx_state_free(gx_game_state* s) { delete s; }

gx_status gx_network_load(const char* path, gx_network** out) {
  GX_CHECK_ARG(path != nullptr && out != nullptr);
  *out = nullptr;
  return Guard([&] {
    *out = new gx_network{std::make_shared<const Network>(Network::Load(path))};
  });
}

gx_status gx_network_num_actions(const gx_network* net, int* n) {
  GX_CHECK_ARG(net != nullptr && n != nullptr);
  *n = net->net->num_actions();
  return GX_OK;
}

gx_status gx_network_step(const gx_network* net, uint64_t* step) {
  GX_CHECK_ARG(net != nullptr && step != nullptr);
  *step = net->net->step();
  return GX_OK;
}

gx_status gx_network_evaluate(const gx_network* net, const gx_game_state* s,
                              double* policy, size_t capacity, double* value) {
  GX_CHECK_ARG(net != nullptr && s != nullptr);
  if (s->game->id() != net->net->shape().game) {
    return Fail(GX_ERR_ARGUMENT, "state and network are for different games");
  }
  if (policy != nullptr &&
      capacity < static_cast<size_t>(net->net->num_actions())) {
    return Fail(GX_ERR_ARGUMENT, "policy buffer too small");
  }
  return Guard([&] {
    const Evaluation e = net->net->Forward(s->state);
    if (policy != nullptr) std::copy(e.policy.begin(), e.policy.end(), policy);
    if (value != nullptr) *value = e.value;
  });
}

void gx_network_free(gx_network* net) { delete net; }

gx_status gx_search_best_action(const gx_network* net, const gx_game_state* s,
                                int iterations, uint64_t seed, int* action) {
  GX_CHECK_ARG(s != nullptr && action != nullptr);
  if (net != nullptr && s->game->id() != net->net->shape().game) {
    return Fail(GX_ERR_ARGUMENT, "state and network are for different games");
  }
  return Guard([&] {
    std::shared_ptr<const Evaluator> evaluator;
    if (net != nullptr) {
      evaluator = std::make_shared<NetworkEvaluator>(net->net);
    } else {
      evaluator = std::make_shared<UniformEvaluator>(*s->game);
    }
    SearchAgent agent(*s->game, evaluator, iterations);
    Rng rng(seed);
    *action = agent.SelectAction(s->state, rng);
  });
}

gx_status gx_solver_best_action(const gx_game_state* s, int iterations,
                                uint64_t seed, int* action, int* proven) {
  GX_CHECK_ARG(s != nullptr && action != nullptr);
  return Guard([&] {
    MctsSolver solver(*s->game);
    Rng rng(seed);
    const SolverResult r = solver.Search(s->state, iterations, rng);
    *action = r.action;
    if (proven != nullptr) *proven = static_cast<int>(r.root);
  });
}

}  // extern "C"
