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

#ifndef GOEXPLOIT_CONFIG_H_
#define GOEXPLOIT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goexploit/archive.h"
#include "goexploit/game.h"
#include "goexploit/model.h"
#include "goexploit/selfplay.h"

namespace goexploit {

enum class Variant {
  kAlphaZero,
  kGEVE,
  kGEVC,
  kGESR,
  kGESC,
  kAKTI,     // AlphaZero + trajectory initialization
  kAKB,      // AlphaZero + branching
  kAKTIB,    // AlphaZero + both
  kGESCKB,   // GESC + branching
  kGESCKPCR, // GESC + playout cap randomization
  kGESCKFP,  // GESC + forced playouts and policy target pruning
  kGESC3K,   // GESC + all three
};

// Case-insensitive ("gesc", "GESC", "alphazero", ...).
Variant ParseVariant(std::string_view name);
std::string_view VariantName(Variant variant);
// True for the variants that start trajectories from an archive.
bool UsesArchive(Variant variant);

struct LearnerConfig {
  int b_step = 4096;  // new samples ingested per learning step
  int num_minibatches = 8;
  int minibatch_size = 512;
  double lr = 1e-3;
  double c = 1e-5;  // L2 coefficient
  int checkpoint_interval = 25;
  double starvation_timeout_s = 600.0;
};

struct ArchiveConfig {
  bool enabled = false;
  ArchiveType type = ArchiveType::kCircular;
  size_t capacity = 100000;
  // Search states from archive actors (GES) instead of visited states
  // written by the learner (GEV).
  bool use_search_states = true;
};

struct ActorConfig {
  int training = 8;
  int archive = 0;
  // Single-threaded round-robin schedule; byte-reproducible runs.
  bool deterministic = false;
  size_t queue_capacity = 64;
  Backpressure backpressure = Backpressure::kBlock;
};

struct RunConfig {
  GameId game = GameId::kConnectFour;
  Variant variant = Variant::kAlphaZero;
  uint64_t seed = 0;
  int total_steps = 600;
  size_t replay_capacity = size_t{1} << 17;
  LearnerConfig learner;
  std::vector<int> hidden = {128, 128};
  SelfplayConfig selfplay;
  ArchiveConfig archive;
  ActorConfig actors;
  bool trajectory_log = true;

  NetworkShape network_shape() const { return {game, hidden}; }
  // Throws ConfigError naming the first offending field.
  void Validate() const;
};

// Tuned Connect Four values for the variant; archive actors set to 1 for
// search-state variants and 0 otherwise.
RunConfig DefaultRunConfig(Variant variant);

// Every field, nested by section. Round-trips through ParseRunConfig.
std::string RunConfigToJson(const RunConfig& cfg);

// Layering, later wins: variant defaults, `json_text` (may be empty), then
// each "dotted.key=value" override. The variant comes from `variant` if set,
// else from the text, else AlphaZero. A run manifest is accepted as text; its
// "config" object is used. Unknown keys and type mismatches are ConfigErrors.
// The result is validated.
RunConfig ParseRunConfig(std::string_view json_text,
                         const std::vector<std::string>& overrides = {},
                         std::optional<std::string> variant = std::nullopt);

// Reads `path` and parses it as above. IoError if unreadable.
RunConfig LoadRunConfig(const std::string& path,
                        const std::vector<std::string>& overrides = {},
                        std::optional<std::string> variant = std::nullopt);

std::string ReadTextFile(const std::string& path);

}  // namespace goexploit

#endif  // GOEXPLOIT_CONFIG_H_
