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

#ifndef GOEXPLOIT_MODEL_H_
#define GOEXPLOIT_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "goexploit/game.h"

namespace goexploit {

constexpr int kFeatureChannels = 3;

// Input planes [channel][row][col]:
//   0: pieces of the side to move, 1: opponent pieces,
//   2: all ones when player 1 is to move, else all zeros.
struct StateFeatures {
  int rows = 0;
  int cols = 0;
  std::vector<double> planes;

  double at(int channel, int row, int col) const {
    return planes[(channel * rows + row) * cols + col];
  }
};

StateFeatures Encode(const Game& game, const GameState& state);
// Writes the same planes into `out` (size channels * rows * cols).
void EncodeInto(const Game& game, const GameState& state,
                std::span<double> out);

// Policy over the full action space plus a value for the side to move.
struct Evaluation {
  std::vector<double> policy;
  double value = 0.0;
};

// Anything that can score a position for search: the network, or a stub in
// tests. Must be safe to call concurrently.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation Evaluate(const GameState& state) const = 0;
};

// Uniform prior, zero value.
class UniformEvaluator final : public Evaluator {
 public:
  explicit UniformEvaluator(const Game& game) : game_(game) {}
  Evaluation Evaluate(const GameState& state) const override;

 private:
  const Game& game_;
};

struct TrainingSample {
  std::vector<double> features;
  std::vector<double> policy_target;
  // Value target z from the perspective of the player to move.
  double value_target = 0.0;
  // False for samples whose policy target must not be trained on
  // (reduced-budget searches); the value target is still used.
  bool has_policy_target = true;
  uint64_t trajectory_id = 0;
};

struct LossBreakdown {
  double value = 0.0;   // mean (z - v)^2
  double policy = 0.0;  // mean -pi . log p
  double l2 = 0.0;      // c * ||theta||^2
  double total() const { return value + policy + l2; }
};

struct NetworkShape {
  GameId game = GameId::kConnectFour;
  std::vector<int> hidden = {128, 128};

  friend bool operator==(const NetworkShape&, const NetworkShape&) = default;
};

// f(s) = (p, v): flattened planes -> dense ReLU layers -> softmax policy head
// and tanh value head. Parameters live in one flat vector so SGD, weight
// decay and checkpoints work on a single buffer.
class Network {
 public:
  // Hidden layers get He-scaled normal weights; both heads start at zero so
  // the untrained network outputs a uniform policy and v = 0.
  Network(NetworkShape shape, uint64_t seed);

  const NetworkShape& shape() const { return shape_; }
  const Game& game() const { return *game_; }
  int input_size() const { return input_size_; }
  int num_actions() const { return game_->num_actions(); }

  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params() { return params_; }
  uint64_t step() const { return step_; }
  void set_step(uint64_t step) { step_ = step; }

  Evaluation Forward(std::span<const double> features) const;
  Evaluation Forward(const GameState& state) const;
  // Column-major batch: features.size() == n * input_size().
  std::vector<Evaluation> ForwardBatch(std::span<const double> features,
                                       int n) const;

  // Mean loss over the batch plus the L2 term. Writes d(loss)/d(theta) into
  // `grad` when non-null (resized to params().size()).
  LossBreakdown Loss(std::span<const TrainingSample> batch, double c,
                     std::vector<double>* grad) const;

  // theta <- theta - lr * grad. Returns the pre-update loss. Throws
  // TrainingError if the loss or any gradient entry is non-finite.
  LossBreakdown SgdStep(std::span<const TrainingSample> batch, double lr,
                        double c);

  double SquaredNorm() const;

  void Save(const std::string& path) const;
  // Throws IoError (naming the path) on a missing, corrupt or
  // version-mismatched file.
  static Network Load(const std::string& path);
  // As Load, but also refuses a checkpoint whose architecture differs.
  static Network LoadCompatible(const std::string& path,
                                const NetworkShape& expected);

 private:
  struct Layer {
    int in = 0;
    int out = 0;
    size_t weights = 0;  // offset of the out x in column-major block
    size_t bias = 0;
  };

  NetworkShape shape_;
  const Game* game_;
  int input_size_ = 0;
  std::vector<Layer> hidden_;
  Layer policy_head_;
  Layer value_head_;
  std::vector<double> params_;
  uint64_t step_ = 0;
};

// Evaluates with a shared, immutable network snapshot.
class NetworkEvaluator final : public Evaluator {
 public:
  explicit NetworkEvaluator(std::shared_ptr<const Network> net)
      : net_(std::move(net)) {}
  Evaluation Evaluate(const GameState& state) const override {
    return net_->Forward(state);
  }
  const Network& network() const { return *net_; }

 private:
  std::shared_ptr<const Network> net_;
};

}  // namespace goexploit

#endif  // GOEXPLOIT_MODEL_H_
