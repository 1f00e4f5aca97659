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

#include "goexploit/config.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace goexploit {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::pair<Variant, std::string_view>, 12> kVariants = {{
    {Variant::kAlphaZero, "alphazero"},
    {Variant::kGEVE, "geve"},
    {Variant::kGEVC, "gevc"},
    {Variant::kGESR, "gesr"},
    {Variant::kGESC, "gesc"},
    {Variant::kAKTI, "akti"},
    {Variant::kAKB, "akb"},
    {Variant::kAKTIB, "aktib"},
    {Variant::kGESCKB, "gesckb"},
    {Variant::kGESCKPCR, "gesckpcr"},
    {Variant::kGESCKFP, "gesckfp"},
    {Variant::kGESC3K, "gesc3k"},
}};

std::string_view BackpressureName(Backpressure b) {
  return b == Backpressure::kBlock ? "block" : "drop_oldest";
}

Backpressure ParseBackpressure(std::string_view name) {
  if (name == "block") return Backpressure::kBlock;
  if (name == "drop_oldest") return Backpressure::kDropOldest;
  throw ConfigError("actors.backpressure: expected block or drop_oldest, got '" +
                    std::string(name) + "'");
}

Json ToJson(const RunConfig& cfg) {
  const SearchConfig& s = cfg.selfplay.search;
  const PlayoutCapConfig pcr = s.playout_cap.value_or(PlayoutCapConfig{});
  const ForcedPlayoutConfig fp =
      s.forced_playouts.value_or(ForcedPlayoutConfig{});
  const KataGoInitConfig init =
      cfg.selfplay.katago_init.value_or(KataGoInitConfig{});
  const BranchingConfig br = cfg.selfplay.branching.value_or(BranchingConfig{});
  Json j;
  j["game"] = GameName(cfg.game);
  j["variant"] = VariantName(cfg.variant);
  j["seed"] = cfg.seed;
  j["total_steps"] = cfg.total_steps;
  j["replay"] = {{"capacity", cfg.replay_capacity}};
  j["learner"] = {{"b_step", cfg.learner.b_step},
                  {"num_minibatches", cfg.learner.num_minibatches},
                  {"minibatch_size", cfg.learner.minibatch_size},
                  {"lr", cfg.learner.lr},
                  {"c", cfg.learner.c},
                  {"checkpoint_interval", cfg.learner.checkpoint_interval},
                  {"starvation_timeout_s", cfg.learner.starvation_timeout_s}};
  j["network"] = {{"hidden", cfg.hidden}};
  j["search"] = {
      {"iterations", s.iterations},
      {"c_puct", s.c_puct},
      {"dirichlet_alpha", s.dirichlet_alpha},
      {"dirichlet_epsilon", s.dirichlet_epsilon},
      {"temperature", s.temperature},
      {"use_root_noise", s.use_root_noise},
      {"playout_cap",
       {{"enabled", s.playout_cap.has_value()},
        {"p_full", pcr.p_full},
        {"full_iters", pcr.full_iters},
        {"small_iters", pcr.small_iters}}},
      {"forced_playouts",
       {{"enabled", s.forced_playouts.has_value()}, {"k_forced", fp.k_forced}}},
  };
  j["selfplay"] = {
      {"lambda", cfg.selfplay.lambda},
      {"k", cfg.selfplay.k},
      {"katago_init",
       {{"enabled", cfg.selfplay.katago_init.has_value()},
        {"min_moves", init.min_moves},
        {"max_moves", init.max_moves}}},
      {"branching",
       {{"enabled", cfg.selfplay.branching.has_value()},
        {"p_branch_alt", br.p_branch_alt},
        {"p_branch_value", br.p_branch_value},
        {"branch_window", br.branch_window},
        {"n_sampled_actions", br.n_sampled_actions}}},
  };
  j["archive"] = {{"enabled", cfg.archive.enabled},
                  {"type", ArchiveTypeName(cfg.archive.type)},
                  {"capacity", cfg.archive.capacity},
                  {"use_search_states", cfg.archive.use_search_states}};
  j["actors"] = {{"training", cfg.actors.training},
                 {"archive", cfg.actors.archive},
                 {"deterministic", cfg.actors.deterministic},
                 {"queue_capacity", cfg.actors.queue_capacity},
                 {"backpressure", BackpressureName(cfg.actors.backpressure)}};
  j["output"] = {{"trajectory_log", cfg.trajectory_log}};
  return j;
}

// Reads `path` ("a.b.c") from j with a type error naming the field.
template <typename T>
T Get(const Json& j, const std::string& path) {
  const Json* node = &j;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    node = &node->at(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  try {
    return node->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + ": wrong type (got " + node->dump() + ")");
  }
}

template <typename T>
T GetNonNegative(const Json& j, const std::string& path) {
  const Json* node = &j;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    node = &node->at(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_number_integer() && node->get<int64_t>() < 0) {
    throw ConfigError(path + ": must be >= 0, got " + node->dump());
  }
  return Get<T>(j, path);
}

RunConfig FromJson(const Json& j) {
  RunConfig cfg;
  cfg.game = ParseGameId(Get<std::string>(j, "game"));
  cfg.variant = ParseVariant(Get<std::string>(j, "variant"));
  cfg.seed = GetNonNegative<uint64_t>(j, "seed");
  cfg.total_steps = Get<int>(j, "total_steps");
  cfg.replay_capacity = GetNonNegative<size_t>(j, "replay.capacity");
  cfg.learner.b_step = Get<int>(j, "learner.b_step");
  cfg.learner.num_minibatches = Get<int>(j, "learner.num_minibatches");
  cfg.learner.minibatch_size = Get<int>(j, "learner.minibatch_size");
  cfg.learner.lr = Get<double>(j, "learner.lr");
  cfg.learner.c = Get<double>(j, "learner.c");
  cfg.learner.checkpoint_interval = Get<int>(j, "learner.checkpoint_interval");
  cfg.learner.starvation_timeout_s =
      Get<double>(j, "learner.starvation_timeout_s");
  cfg.hidden = Get<std::vector<int>>(j, "network.hidden");

  SearchConfig& s = cfg.selfplay.search;
  s.iterations = Get<int>(j, "search.iterations");
  s.c_puct = Get<double>(j, "search.c_puct");
  s.dirichlet_alpha = Get<double>(j, "search.dirichlet_alpha");
  s.dirichlet_epsilon = Get<double>(j, "search.dirichlet_epsilon");
  s.temperature = Get<double>(j, "search.temperature");
  s.use_root_noise = Get<bool>(j, "search.use_root_noise");
  if (Get<bool>(j, "search.playout_cap.enabled")) {
    s.playout_cap = PlayoutCapConfig{
        Get<double>(j, "search.playout_cap.p_full"),
        Get<int>(j, "search.playout_cap.full_iters"),
        Get<int>(j, "search.playout_cap.small_iters")};
  }
  if (Get<bool>(j, "search.forced_playouts.enabled")) {
    s.forced_playouts =
        ForcedPlayoutConfig{Get<double>(j, "search.forced_playouts.k_forced")};
  }

  cfg.selfplay.lambda = Get<double>(j, "selfplay.lambda");
  cfg.selfplay.k = Get<int>(j, "selfplay.k");
  if (Get<bool>(j, "selfplay.katago_init.enabled")) {
    cfg.selfplay.katago_init =
        KataGoInitConfig{Get<int>(j, "selfplay.katago_init.min_moves"),
                         Get<int>(j, "selfplay.katago_init.max_moves")};
  }
  if (Get<bool>(j, "selfplay.branching.enabled")) {
    cfg.selfplay.branching = BranchingConfig{
        Get<double>(j, "selfplay.branching.p_branch_alt"),
        Get<double>(j, "selfplay.branching.p_branch_value"),
        Get<int>(j, "selfplay.branching.branch_window"),
        Get<int>(j, "selfplay.branching.n_sampled_actions")};
  }

  cfg.archive.enabled = Get<bool>(j, "archive.enabled");
  cfg.archive.type = ParseArchiveType(Get<std::string>(j, "archive.type"));
  cfg.archive.capacity = GetNonNegative<size_t>(j, "archive.capacity");
  cfg.archive.use_search_states = Get<bool>(j, "archive.use_search_states");

  cfg.actors.training = Get<int>(j, "actors.training");
  cfg.actors.archive = Get<int>(j, "actors.archive");
  cfg.actors.deterministic = Get<bool>(j, "actors.deterministic");
  cfg.actors.queue_capacity = GetNonNegative<size_t>(j, "actors.queue_capacity");
  cfg.actors.backpressure =
      ParseBackpressure(Get<std::string>(j, "actors.backpressure"));
  cfg.trajectory_log = Get<bool>(j, "output.trajectory_log");
  return cfg;
}

// Copies `patch` onto `base`, rejecting keys `base` does not have.
void MergeKnown(Json& base, const Json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    throw ConfigError((prefix.empty() ? std::string("config") : prefix) +
                      ": expected an object");
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    Json& target = base[key];
    if (target.is_object()) {
      MergeKnown(target, value, path);
    } else {
      target = value;
    }
  }
}

void ApplyOverride(Json& base, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;  // bare strings need no quotes
  Json* node = &base;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) {
    MergeKnown(*node, value, path);
  } else {
    *node = value;
  }
}

}  // namespace

Variant ParseVariant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const auto& [variant, text] : kVariants) {
    if (lower == text) return variant;
  }
  throw ConfigError("variant: unknown variant '" + std::string(name) + "'");
}

std::string_view VariantName(Variant variant) {
  for (const auto& [v, text] : kVariants) {
    if (v == variant) return text;
  }
  return "unknown";
}

bool UsesArchive(Variant variant) {
  switch (variant) {
    case Variant::kAlphaZero:
    case Variant::kAKTI:
    case Variant::kAKB:
    case Variant::kAKTIB:
      return false;
    default:
      return true;
  }
}

RunConfig DefaultRunConfig(Variant variant) {
  RunConfig cfg;
  cfg.variant = variant;
  SelfplayConfig& sp = cfg.selfplay;
  switch (variant) {
    case Variant::kAlphaZero:
      break;
    case Variant::kAKTI:
      sp.katago_init = KataGoInitConfig{};
      break;
    case Variant::kAKB:
      sp.branching = BranchingConfig{};
      break;
    case Variant::kAKTIB:
      sp.katago_init = KataGoInitConfig{};
      sp.branching = BranchingConfig{};
      break;
    case Variant::kGEVE:
      sp.k = 5;
      sp.lambda = 0.1;
      cfg.archive = {true, ArchiveType::kExpanding, 0, false};
      break;
    case Variant::kGEVC:
      sp.search.dirichlet_epsilon = 0.1;
      sp.lambda = 0.1;
      cfg.archive = {true, ArchiveType::kCircular, 1000000, false};
      break;
    case Variant::kGESR:
      sp.k = 2;
      sp.lambda = 0.0;
      cfg.archive = {true, ArchiveType::kReservoir, 1000000, true};
      break;
    case Variant::kGESC:
    case Variant::kGESCKB:
    case Variant::kGESCKPCR:
    case Variant::kGESCKFP:
    case Variant::kGESC3K:
      sp.lambda = 0.01;
      cfg.archive = {true, ArchiveType::kCircular, 100000, true};
      break;
  }
  if (variant == Variant::kGESCKB || variant == Variant::kGESC3K) {
    sp.branching = BranchingConfig{};
  }
  if (variant == Variant::kGESCKPCR || variant == Variant::kGESC3K) {
    sp.search.playout_cap = PlayoutCapConfig{};
  }
  if (variant == Variant::kGESCKFP || variant == Variant::kGESC3K) {
    sp.search.forced_playouts = ForcedPlayoutConfig{};
  }
  cfg.actors.archive =
      cfg.archive.enabled && cfg.archive.use_search_states ? 1 : 0;
  return cfg;
}

void RunConfig::Validate() const {
  if (total_steps < 1) throw ConfigError("total_steps: must be >= 1");
  if (replay_capacity < 1) throw ConfigError("replay.capacity: must be >= 1");
  if (learner.b_step < 1) throw ConfigError("learner.b_step: must be >= 1");
  if (learner.num_minibatches < 1) {
    throw ConfigError("learner.num_minibatches: must be >= 1");
  }
  if (learner.minibatch_size < 1) {
    throw ConfigError("learner.minibatch_size: must be >= 1");
  }
  if (!(learner.lr > 0.0)) throw ConfigError("learner.lr: must be > 0");
  if (!(learner.c >= 0.0)) throw ConfigError("learner.c: must be >= 0");
  if (learner.checkpoint_interval < 1) {
    throw ConfigError("learner.checkpoint_interval: must be >= 1");
  }
  if (!(learner.starvation_timeout_s > 0.0)) {
    throw ConfigError("learner.starvation_timeout_s: must be > 0");
  }
  if (hidden.empty()) {
    throw ConfigError("network.hidden: need at least one hidden layer");
  }
  for (int w : hidden) {
    if (w < 1) throw ConfigError("network.hidden: widths must be >= 1");
  }
  selfplay.Validate();
  if (archive.enabled != UsesArchive(variant)) {
    throw ConfigError(std::string("archive.enabled: variant ") +
                      std::string(VariantName(variant)) +
                      (UsesArchive(variant) ? " needs an archive"
                                            : " does not use an archive"));
  }
  if (archive.enabled && archive.type != ArchiveType::kExpanding &&
      archive.capacity < 1) {
    throw ConfigError("archive.capacity: must be >= 1");
  }
  if (actors.training < 1) throw ConfigError("actors.training: must be >= 1");
  if (actors.archive < 0) throw ConfigError("actors.archive: must be >= 0");
  const bool search_states = archive.enabled && archive.use_search_states;
  if (search_states && actors.archive < 1) {
    throw ConfigError(
        "actors.archive: search-state archives need at least one archive "
        "actor");
  }
  if (!search_states && actors.archive > 0) {
    throw ConfigError(
        "actors.archive: archive actors require a search-state archive");
  }
  if (actors.queue_capacity < 1) {
    throw ConfigError("actors.queue_capacity: must be >= 1");
  }
}

std::string RunConfigToJson(const RunConfig& cfg) {
  return ToJson(cfg).dump(2);
}

RunConfig ParseRunConfig(std::string_view json_text,
                         const std::vector<std::string>& overrides,
                         std::optional<std::string> variant) {
  Json file = Json::object();
  if (!json_text.empty()) {
    file = Json::parse(json_text, nullptr, false);
    if (file.is_discarded()) throw ConfigError("config: not valid JSON");
    if (!file.is_object()) throw ConfigError("config: expected an object");
    if (file.contains("config") && !file.contains("game")) {
      Json inner = file["config"];
      file = std::move(inner);
    }
  }
  std::string variant_name = "alphazero";
  if (variant) {
    variant_name = *variant;
  } else if (file.contains("variant")) {
    if (!file["variant"].is_string()) {
      throw ConfigError("variant: wrong type (got " + file["variant"].dump() +
                        ")");
    }
    variant_name = file["variant"].get<std::string>();
  }
  const Variant v = ParseVariant(variant_name);
  Json merged = ToJson(DefaultRunConfig(v));
  MergeKnown(merged, file, "");
  merged["variant"] = VariantName(v);
  for (const std::string& o : overrides) ApplyOverride(merged, o);
  RunConfig cfg = FromJson(merged);
  cfg.Validate();
  return cfg;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failed");
  return text.str();
}

RunConfig LoadRunConfig(const std::string& path,
                        const std::vector<std::string>& overrides,
                        std::optional<std::string> variant) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseRunConfig(text, overrides, std::move(variant));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace goexploit
