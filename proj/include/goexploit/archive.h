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

#ifndef GOEXPLOIT_ARCHIVE_H_
#define GOEXPLOIT_ARCHIVE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "goexploit/game.h"

namespace goexploit {

enum class ArchiveType { kExpanding, kCircular, kReservoir };

ArchiveType ParseArchiveType(std::string_view name);
std::string_view ArchiveTypeName(ArchiveType type);

// Who performed an update; counted so tests can check that exactly one role
// ever writes a given archive.
enum class ArchiveWriter { kLearner = 0, kArchiveActor = 1, kOther = 2 };

struct ArchiveStats {
  size_t size = 0;
  uint64_t n_offered = 0;
  size_t unique_keys = 0;
};

// Pool of start states for self-play. Duplicates are kept, so sampling is
// weighted by how often a state was offered (and survived eviction).
//
// Expanding: every offered state is appended.
// Circular:  holds the last `capacity` offered states; oldest evicted first.
// Reservoir: classic Algorithm R over the offer stream; the seed state counts
//            as the first offer, so n_offered starts at 1.
//
// Thread-safe: any number of concurrent samplers; updates are serialized.
class Archive {
 public:
  // Throws ConfigError if capacity is 0 for a bounded type.
  Archive(const Game& game, ArchiveType type, size_t capacity,
          const GameState& initial_state, uint64_t seed);

  Archive(const Archive&) = delete;
  Archive& operator=(const Archive&) = delete;

  // Uniform over stored items, duplicates included. Never mutates contents.
  GameState Sample(Rng& rng) const;

  // Offers each state in order. Throws ContractViolation (before changing
  // anything) if any state is terminal.
  void Update(std::span<const GameState> states,
              ArchiveWriter writer = ArchiveWriter::kOther);

  ArchiveType type() const { return type_; }
  size_t capacity() const { return capacity_; }
  size_t size() const;
  uint64_t n_offered() const;
  ArchiveStats Stats() const;
  // Circular: oldest to newest. Other types: storage order.
  std::vector<GameState> Items() const;
  // Number of Update calls made by `writer`.
  uint64_t UpdatesBy(ArchiveWriter writer) const;

  // One "key,count" line per distinct stored state, sorted by key.
  void DumpKeys(std::ostream& out) const;

 private:
  const Game& game_;
  const ArchiveType type_;
  const size_t capacity_;
  mutable std::mutex mu_;
  std::vector<GameState> items_;
  size_t head_ = 0;  // Circular: oldest slot once full
  uint64_t n_offered_ = 0;
  Rng rng_;
  std::array<uint64_t, 3> updates_by_{};
};

}  // namespace goexploit

#endif  // GOEXPLOIT_ARCHIVE_H_
