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

#include "goexploit/archive.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_set>

namespace goexploit {

ArchiveType ParseArchiveType(std::string_view name) {
  if (name == "expanding") return ArchiveType::kExpanding;
  if (name == "circular") return ArchiveType::kCircular;
  if (name == "reservoir") return ArchiveType::kReservoir;
  throw ConfigError("archive.type: unknown archive type '" +
                    std::string(name) +
                    "' (expected expanding, circular or reservoir)");
}

std::string_view ArchiveTypeName(ArchiveType type) {
  switch (type) {
    case ArchiveType::kExpanding:
      return "expanding";
    case ArchiveType::kCircular:
      return "circular";
    case ArchiveType::kReservoir:
      return "reservoir";
  }
  return "unknown";
}

Archive::Archive(const Game& game, ArchiveType type, size_t capacity,
                 const GameState& initial_state, uint64_t seed)
    : game_(game), type_(type), capacity_(capacity), rng_(seed) {
  if (type != ArchiveType::kExpanding && capacity == 0) {
    throw ConfigError("archive.capacity: must be >= 1");
  }
  GX_REQUIRE(!game.IsTerminal(initial_state), "initial state is terminal");
  items_.push_back(initial_state);
  n_offered_ = 1;
}

GameState Archive::Sample(Rng& rng) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uniform_int_distribution<size_t> pick(0, items_.size() - 1);
  return items_[pick(rng)];
}

void Archive::Update(std::span<const GameState> states, ArchiveWriter writer) {
  for (const GameState& s : states) {
    GX_REQUIRE(!game_.IsTerminal(s), "terminal state offered to archive");
  }
  std::lock_guard<std::mutex> lock(mu_);
  ++updates_by_[static_cast<size_t>(writer)];
  for (const GameState& s : states) {
    switch (type_) {
      case ArchiveType::kExpanding:
        items_.push_back(s);
        break;
      case ArchiveType::kCircular:
        if (items_.size() < capacity_) {
          items_.push_back(s);
        } else {
          items_[head_] = s;
          head_ = (head_ + 1) % capacity_;
        }
        break;
      case ArchiveType::kReservoir:
        if (items_.size() < capacity_) {
          items_.push_back(s);
        } else {
          std::uniform_int_distribution<uint64_t> pick(0, n_offered_);
          // n_offered_ items precede this one, so it is item n_offered_ + 1.
          const uint64_t i = pick(rng_);
          if (i < capacity_) items_[i] = s;
        }
        break;
    }
    ++n_offered_;
  }
}

size_t Archive::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return items_.size();
}

uint64_t Archive::n_offered() const {
  std::lock_guard<std::mutex> lock(mu_);
  return n_offered_;
}

ArchiveStats Archive::Stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::unordered_set<StateKey, StateKeyHash> keys;
  keys.reserve(items_.size());
  for (const GameState& s : items_) keys.insert(KeyOf(s));
  return {items_.size(), n_offered_, keys.size()};
}

std::vector<GameState> Archive::Items() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<GameState> out;
  out.reserve(items_.size());
  for (size_t i = 0; i < items_.size(); ++i) {
    out.push_back(items_[(head_ + i) % items_.size()]);
  }
  return out;
}

uint64_t Archive::UpdatesBy(ArchiveWriter writer) const {
  std::lock_guard<std::mutex> lock(mu_);
  return updates_by_[static_cast<size_t>(writer)];
}

void Archive::DumpKeys(std::ostream& out) const {
  std::map<std::string, uint64_t> counts;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const GameState& s : items_) ++counts[KeyOf(s).ToString()];
  }
  for (const auto& [key, count] : counts) out << key << ',' << count << '\n';
}

}  // namespace goexploit
