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

#ifndef GOEXPLOIT_REPLAY_H_
#define GOEXPLOIT_REPLAY_H_

#include <cstdint>
#include <vector>

#include "goexploit/common.h"
#include "goexploit/model.h"

namespace goexploit {

// Fixed-capacity FIFO of training samples. Owned by the learner; not
// thread-safe.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void Add(TrainingSample sample);

  // Uniform with replacement over the current contents.
  std::vector<TrainingSample> SampleBatch(size_t batch_size, Rng& rng) const;

  size_t size() const { return samples_.size(); }
  size_t capacity() const { return capacity_; }
  uint64_t total_added() const { return total_added_; }
  // Number of distinct trajectories with at least one sample in the buffer.
  size_t DistinctTrajectories() const;

  // i = 0 is the oldest sample.
  const TrainingSample& at(size_t i) const;

 private:
  size_t capacity_;
  std::vector<TrainingSample> samples_;
  size_t head_ = 0;  // oldest slot once full
  uint64_t total_added_ = 0;
};

}  // namespace goexploit

#endif  // GOEXPLOIT_REPLAY_H_
