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

#include <map>

#include "goexploit/replay.h"

namespace goexploit {
namespace {

TrainingSample Tagged(uint64_t id, double z) {
  TrainingSample s;
  s.trajectory_id = id;
  s.value_target = z;
  return s;
}

TEST(ReplayBufferTest, ZeroCapacityIsRejected) {
  EXPECT_THROW(ReplayBuffer(0), ConfigError);
}

TEST(ReplayBufferTest, KeepsMostRecentInFifoOrder) {
  ReplayBuffer buf(5);
  for (int i = 0; i < 13; ++i) buf.Add(Tagged(i / 2, i));
  EXPECT_EQ(buf.size(), 5u);
  EXPECT_EQ(buf.total_added(), 13u);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(buf.at(i).value_target, 8.0 + i);
  // Samples 8..12 belong to trajectories 4, 5, 6.
  EXPECT_EQ(buf.DistinctTrajectories(), 3u);
  EXPECT_THROW(buf.at(5), ContractViolation);
}

TEST(ReplayBufferTest, SamplingIsUniformOverContents) {
  ReplayBuffer buf(4);
  for (int i = 0; i < 6; ++i) buf.Add(Tagged(i, i));
  Rng rng(1);
  std::map<double, int> counts;
  const int n = 40000;
  for (const TrainingSample& s : buf.SampleBatch(n, rng)) ++counts[s.value_target];
  ASSERT_EQ(counts.size(), 4u);
  for (auto [z, c] : counts) {
    EXPECT_GE(z, 2.0);
    EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.01);
  }
  ReplayBuffer empty(3);
  EXPECT_THROW(empty.SampleBatch(1, rng), ContractViolation);
}

}  // namespace
}  // namespace goexploit
