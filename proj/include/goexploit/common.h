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

#ifndef GOEXPLOIT_COMMON_H_
#define GOEXPLOIT_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace goexploit {

// Every source of randomness in the library is one of these, seeded
// explicitly, so runs are reproducible from their seed alone.
using Rng = std::mt19937_64;

// Bad user-supplied configuration (unknown game id, value out of domain...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Learning diverged or stalled (non-finite loss, actor starvation).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GX_REQUIRE(cond, msg)                                       \
  do {                                                              \
    if (!(cond)) throw ::goexploit::ContractViolation(              \
        std::string(__func__) + ": " + (msg));                      \
  } while (0)

// Derives a child seed from a parent seed and a stream index (splitmix64).
inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace goexploit

#endif  // GOEXPLOIT_COMMON_H_
