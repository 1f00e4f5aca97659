/* Copyright 2026 The goexploit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libgoexploit. Every call returns a gx_status; on failure
 * gx_last_error() holds a one-line message for the calling thread. Handles
 * are opaque and owned by the caller, who releases them with the matching
 * *_free function. Strings returned through char** are released with
 * gx_string_free. */

#ifndef GOEXPLOIT_GOEXPLOIT_C_H_
#define GOEXPLOIT_GOEXPLOIT_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GX_BUILDING_LIBRARY)
#define GX_API __attribute__((visibility("default")))
#else
#define GX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gx_status {
  GX_OK = 0,
  GX_ERR_ARGUMENT = 1, /* null pointer, buffer too small, bad enum */
  GX_ERR_CONFIG = 2,   /* invalid configuration or option value */
  GX_ERR_CONTRACT = 3, /* precondition violated (e.g. illegal move) */
  GX_ERR_IO = 4,       /* unreadable/unwritable file, corrupt checkpoint */
  GX_ERR_TRAINING = 5, /* non-finite loss, actor starvation */
  GX_ERR_INTERNAL = 6
} gx_status;

GX_API const char* gx_last_error(void);
GX_API const char* gx_version(void);
GX_API const char* gx_status_name(gx_status status);
GX_API void gx_string_free(char* s);

/* ---- Run configuration ------------------------------------------------ */

typedef struct gx_config gx_config;

/* Defaults for `variant` (NULL = taken from the file, else alphazero), then
 * the JSON file at `path` (NULL = none). A run manifest is accepted. */
GX_API gx_status gx_config_load(const char* path, const char* variant,
                                gx_config** out);
/* Applies "dotted.key=value" on top of what is already there and
 * re-validates. On failure the config is unchanged. */
GX_API gx_status gx_config_set(gx_config* cfg, const char* assignment);
/* The fully resolved configuration. */
GX_API gx_status gx_config_to_json(const gx_config* cfg, char** out_json);
GX_API void gx_config_free(gx_config* cfg);

/* ---- Training --------------------------------------------------------- */

typedef struct gx_step_report {
  int step;
  double loss_total;
  double loss_value;
  double loss_policy;
  uint64_t samples;
  uint64_t trajectories;
  uint64_t archive_size;
  uint64_t unique_archive_keys;
} gx_step_report;

typedef void (*gx_step_callback)(const gx_step_report* report, void* user);

/* Runs training into out_dir (created if needed). `callback` may be NULL. */
GX_API gx_status gx_train(const gx_config* cfg, const char* out_dir,
                          gx_step_callback callback, void* user);

/* ---- Evaluation ------------------------------------------------------- */

/* `target` is a checkpoint file or a run directory. A checkpoint writes one
 * row per level (level,matches,wins,draws,losses,win_rate) to out_csv; a run
 * directory evaluates every checkpoint in its manifest, using the run's
 * search iterations when `iterations` <= 0, and writes <run>/eval.csv
 * (step,level,matches,win_rate) unless out_csv is given. */
GX_API gx_status gx_evaluate(const char* target, const int* levels,
                             size_t n_levels, int n_matches, int iterations,
                             uint64_t seed, const char* out_csv);

/* Every (a, b) pair plays one game per seat. */
GX_API gx_status gx_tournament(const char* const* side_a, size_t n_a,
                               const char* const* side_b, size_t n_b,
                               int iterations, uint64_t seed,
                               double* win_rate_a, int* games);

/* Writes depth.csv (depth,unique_states) and summary.json (trajectories per
 * step, unique states beyond k, ...) for a run into out_dir. */
GX_API gx_status gx_stats(const char* run_dir, const char* out_dir);

/* mode is "visited" or "search". Self-play settings come from the run that
 * produced the checkpoint when `run_dir` is given, else defaults.
 * max_states caps search mode (0 = all). */
GX_API gx_status gx_value_loss(const char* checkpoint, const char* run_dir,
                               const char* mode, int n_games,
                               size_t max_states, uint64_t seed, double* mse,
                               uint64_t* n_states);

/* Aggregates eval.csv across runs into curves.csv and auc.csv. */
GX_API gx_status gx_emit_curves(const char* const* run_dirs, size_t n_runs,
                                int window, const char* out_dir);

/* ---- Games, networks and search ----------------------------------------- */

typedef struct gx_game_state gx_game_state;
typedef struct gx_network gx_network;

/* game: "connect4" or "tictactoe". */
GX_API gx_status gx_state_initial(const char* game, gx_game_state** out);
GX_API gx_status gx_state_clone(const gx_game_state* s, gx_game_state** out);
GX_API gx_status gx_state_apply(gx_game_state* s, int action);
/* Writes up to `capacity` actions; *count receives the total. */
GX_API gx_status gx_state_legal_actions(const gx_game_state* s, int* actions,
                                        size_t capacity, size_t* count);
/* *terminal is 1 or 0; *value is +1/-1/0 for player 1 when terminal. */
GX_API gx_status gx_state_outcome(const gx_game_state* s, int* terminal,
                                  int* value);
GX_API gx_status gx_state_to_move(const gx_game_state* s, int* player);
GX_API gx_status gx_state_key(const gx_game_state* s, char** out);
GX_API gx_status gx_state_render(const gx_game_state* s, char** out);
GX_API void gx_state_free(gx_game_state* s);

GX_API gx_status gx_network_load(const char* path, gx_network** out);
GX_API gx_status gx_network_num_actions(const gx_network* net, int* n);
GX_API gx_status gx_network_step(const gx_network* net, uint64_t* step);
/* policy receives num_actions entries. */
GX_API gx_status gx_network_evaluate(const gx_network* net,
                                     const gx_game_state* s, double* policy,
                                     size_t capacity, double* value);
GX_API void gx_network_free(gx_network* net);

/* Noise-free search; `net` NULL uses a uniform prior and zero value. */
GX_API gx_status gx_search_best_action(const gx_network* net,
                                       const gx_game_state* s, int iterations,
                                       uint64_t seed, int* action);
/* MCTS-Solver move at `iterations` simulations; *proven is 0 unknown,
 * 1 win, 2 loss, 3 draw for the side to move. */
GX_API gx_status gx_solver_best_action(const gx_game_state* s, int iterations,
                                       uint64_t seed, int* action,
                                       int* proven);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* GOEXPLOIT_GOEXPLOIT_C_H_ */
