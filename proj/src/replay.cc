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

#include "goexploit/replay.h"

#include <unordered_set>

namespace goexploit {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay.capacity: must be >= 1");
  samples_.reserve(std::min<size_t>(capacity, 1 << 16));
}

void ReplayBuffer::Add(TrainingSample sample) {
  ++total_added_;
  if (samples_.size() < capacity_) {
    samples_.push_back(std::move(sample));
    return;
  }
  samples_[head_] = std::move(sample);
  head_ = (head_ + 1) % capacity_;
}

std::vector<TrainingSample> ReplayBuffer::SampleBatch(size_t batch_size,
                                                      Rng& rng) const {
  GX_REQUIRE(!samples_.empty(), "replay buffer is empty");
  std::uniform_int_distribution<size_t> pick(0, samples_.size() - 1);
  std::vector<TrainingSample> batch;
  batch.reserve(batch_size);
  for (size_t i = 0; i < batch_size; ++i) batch.push_back(samples_[pick(rng)]);
  return batch;
}

size_t ReplayBuffer::DistinctTrajectories() const {
  std::unordered_set<uint64_t> ids;
  for (const TrainingSample& s : samples_) ids.insert(s.trajectory_id);
  return ids.size();
}

const TrainingSample& ReplayBuffer::at(size_t i) const {
  GX_REQUIRE(i < samples_.size(), "index out of range");
  return samples_[(head_ + i) % samples_.size()];
}

}  // namespace goexploit
