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

#include "goexploit/model.h"

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <fstream>

namespace goexploit {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMatMap = Eigen::Map<const MatrixXd>;
using ConstVecMap = Eigen::Map<const VectorXd>;
using MatMap = Eigen::Map<MatrixXd>;
using VecMap = Eigen::Map<VectorXd>;

constexpr char kMagic[8] = {'G', 'X', 'N', 'E', 'T', 0, 0, 0};
constexpr uint32_t kFormatVersion = 1;

// Column-wise softmax, stable under large logits.
MatrixXd Softmax(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    double mx = logits.col(j).maxCoeff();
    out.col(j) = (logits.col(j).array() - mx).exp();
    out.col(j) /= out.col(j).sum();
  }
  return out;
}

uint64_t Fnv1a(const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
void WritePod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("checkpoint '" + path + "' is truncated");
  return v;
}

}  // namespace

void EncodeInto(const Game& game, const GameState& state,
                std::span<double> out) {
  const int rows = game.rows();
  const int cols = game.cols();
  const size_t plane = static_cast<size_t>(rows) * cols;
  GX_REQUIRE(out.size() == kFeatureChannels * plane, "feature size mismatch");
  const int me = state.to_move;
  const double p1_to_move = me == 1 ? 1.0 : 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const size_t i = static_cast<size_t>(r) * cols + c;
      const int owner = game.CellOwner(state, r, c);
      out[i] = owner == me ? 1.0 : 0.0;
      out[plane + i] = (owner != 0 && owner != me) ? 1.0 : 0.0;
      out[2 * plane + i] = p1_to_move;
    }
  }
}

StateFeatures Encode(const Game& game, const GameState& state) {
  StateFeatures f;
  f.rows = game.rows();
  f.cols = game.cols();
  f.planes.resize(static_cast<size_t>(kFeatureChannels) * f.rows * f.cols);
  EncodeInto(game, state, f.planes);
  return f;
}

Evaluation UniformEvaluator::Evaluate(const GameState& state) const {
  Evaluation e;
  e.policy.assign(game_.num_actions(), 1.0 / game_.num_actions());
  (void)state;
  return e;
}

Network::Network(NetworkShape shape, uint64_t seed)
    : shape_(std::move(shape)), game_(&GetGame(shape_.game)) {
  if (shape_.hidden.empty()) {
    throw ConfigError("network.hidden: need at least one hidden layer");
  }
  for (int w : shape_.hidden) {
    if (w <= 0) throw ConfigError("network.hidden: widths must be positive");
  }
  input_size_ = kFeatureChannels * game_->rows() * game_->cols();

  size_t offset = 0;
  auto add_layer = [&](int in, int out) {
    Layer l{in, out, offset, offset + static_cast<size_t>(in) * out};
    offset = l.bias + out;
    return l;
  };
  int in = input_size_;
  for (int w : shape_.hidden) {
    hidden_.push_back(add_layer(in, w));
    in = w;
  }
  policy_head_ = add_layer(in, game_->num_actions());
  value_head_ = add_layer(in, 1);
  params_.assign(offset, 0.0);

  Rng rng(seed);
  for (const Layer& l : hidden_) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / l.in));
    for (size_t i = 0; i < static_cast<size_t>(l.in) * l.out; ++i) {
      params_[l.weights + i] = dist(rng);
    }
  }
}

Evaluation Network::Forward(std::span<const double> features) const {
  GX_REQUIRE(features.size() == static_cast<size_t>(input_size_),
             "feature size mismatch");
  const double* p = params_.data();
  VectorXd h = ConstVecMap(features.data(), input_size_);
  for (const Layer& l : hidden_) {
    VectorXd pre = ConstMatMap(p + l.weights, l.out, l.in) * h +
                   ConstVecMap(p + l.bias, l.out);
    h = pre.cwiseMax(0.0);
  }
  VectorXd logits =
      ConstMatMap(p + policy_head_.weights, policy_head_.out, policy_head_.in) *
          h +
      ConstVecMap(p + policy_head_.bias, policy_head_.out);
  double v = (ConstMatMap(p + value_head_.weights, 1, value_head_.in) * h)(0) +
             p[value_head_.bias];
  Evaluation e;
  const double mx = logits.maxCoeff();
  e.policy.resize(policy_head_.out);
  double sum = 0.0;
  for (int a = 0; a < policy_head_.out; ++a) {
    e.policy[a] = std::exp(logits(a) - mx);
    sum += e.policy[a];
  }
  for (double& x : e.policy) x /= sum;
  e.value = std::tanh(v);
  return e;
}

Evaluation Network::Forward(const GameState& state) const {
  GX_REQUIRE(state.game == shape_.game, "state belongs to another game");
  thread_local std::vector<double> buf;
  buf.resize(input_size_);
  EncodeInto(*game_, state, buf);
  return Forward(std::span<const double>(buf));
}

std::vector<Evaluation> Network::ForwardBatch(std::span<const double> features,
                                              int n) const {
  GX_REQUIRE(n >= 0 && features.size() == static_cast<size_t>(n) * input_size_,
             "feature size mismatch");
  std::vector<Evaluation> out;
  if (n == 0) return out;
  const double* p = params_.data();
  MatrixXd h = ConstMatMap(features.data(), input_size_, n);
  for (const Layer& l : hidden_) {
    MatrixXd pre = ConstMatMap(p + l.weights, l.out, l.in) * h;
    pre.colwise() += ConstVecMap(p + l.bias, l.out);
    h = pre.cwiseMax(0.0);
  }
  MatrixXd logits =
      ConstMatMap(p + policy_head_.weights, policy_head_.out, policy_head_.in) *
      h;
  logits.colwise() += ConstVecMap(p + policy_head_.bias, policy_head_.out);
  MatrixXd probs = Softmax(logits);
  Eigen::RowVectorXd v =
      ConstMatMap(p + value_head_.weights, 1, value_head_.in) * h;
  out.resize(n);
  for (int j = 0; j < n; ++j) {
    out[j].policy.assign(probs.col(j).data(),
                         probs.col(j).data() + policy_head_.out);
    out[j].value = std::tanh(v(j) + p[value_head_.bias]);
  }
  return out;
}

LossBreakdown Network::Loss(std::span<const TrainingSample> batch, double c,
                            std::vector<double>* grad) const {
  GX_REQUIRE(!batch.empty(), "empty batch");
  const int n = static_cast<int>(batch.size());
  const int actions = policy_head_.out;
  const double* p = params_.data();

  MatrixXd x(input_size_, n);
  MatrixXd pi(actions, n);
  Eigen::RowVectorXd z(n);
  Eigen::RowVectorXd policy_weight(n);
  for (int j = 0; j < n; ++j) {
    const TrainingSample& s = batch[j];
    GX_REQUIRE(s.features.size() == static_cast<size_t>(input_size_) &&
                   s.policy_target.size() == static_cast<size_t>(actions),
               "sample shape mismatch");
    x.col(j) = ConstVecMap(s.features.data(), input_size_);
    pi.col(j) = ConstVecMap(s.policy_target.data(), actions);
    z(j) = s.value_target;
    policy_weight(j) = s.has_policy_target ? 1.0 : 0.0;
  }

  // Forward, keeping activations for backprop.
  std::vector<MatrixXd> acts;
  acts.reserve(hidden_.size() + 1);
  acts.push_back(std::move(x));
  for (const Layer& l : hidden_) {
    MatrixXd pre = ConstMatMap(p + l.weights, l.out, l.in) * acts.back();
    pre.colwise() += ConstVecMap(p + l.bias, l.out);
    acts.push_back(pre.cwiseMax(0.0));
  }
  const MatrixXd& h = acts.back();
  MatrixXd logits =
      ConstMatMap(p + policy_head_.weights, actions, policy_head_.in) * h;
  logits.colwise() += ConstVecMap(p + policy_head_.bias, actions);
  Eigen::RowVectorXd v =
      (ConstMatMap(p + value_head_.weights, 1, value_head_.in) * h).array() +
      p[value_head_.bias];
  v = v.array().tanh();

  MatrixXd probs(actions, n);
  MatrixXd log_probs(actions, n);
  for (int j = 0; j < n; ++j) {
    const double mx = logits.col(j).maxCoeff();
    const double lse =
        mx + std::log((logits.col(j).array() - mx).exp().sum());
    log_probs.col(j) = logits.col(j).array() - lse;
    probs.col(j) = log_probs.col(j).array().exp();
  }

  LossBreakdown loss;
  Eigen::RowVectorXd diff = z - v;
  loss.value = diff.squaredNorm() / n;
  double policy_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (policy_weight(j) == 0.0) continue;
    for (int a = 0; a < actions; ++a) {
      if (pi(a, j) != 0.0) policy_sum -= pi(a, j) * log_probs(a, j);
    }
  }
  loss.policy = policy_sum / n;
  const double norm = SquaredNorm();
  loss.l2 = c * norm;

  if (grad == nullptr) return loss;

  grad->assign(params_.size(), 0.0);
  double* g = grad->data();

  // Policy head: d/dlogits of -pi.log softmax = p - pi (pi sums to one).
  MatrixXd dlogits = (probs - pi);
  dlogits.array().rowwise() *= policy_weight.array() / n;
  // Value head through tanh.
  Eigen::RowVectorXd dv =
      (-2.0 / n) * diff.array() * (1.0 - v.array().square());

  MatMap(g + policy_head_.weights, actions, policy_head_.in) =
      dlogits * h.transpose();
  VecMap(g + policy_head_.bias, actions) = dlogits.rowwise().sum();
  MatMap(g + value_head_.weights, 1, value_head_.in) = dv * h.transpose();
  g[value_head_.bias] = dv.sum();

  MatrixXd dh =
      ConstMatMap(p + policy_head_.weights, actions, policy_head_.in)
              .transpose() *
          dlogits +
      ConstMatMap(p + value_head_.weights, 1, value_head_.in).transpose() * dv;

  for (size_t li = hidden_.size(); li-- > 0;) {
    const Layer& l = hidden_[li];
    MatrixXd dpre =
        (acts[li + 1].array() > 0.0).cast<double>() * dh.array();
    MatMap(g + l.weights, l.out, l.in) = dpre * acts[li].transpose();
    VecMap(g + l.bias, l.out) = dpre.rowwise().sum();
    if (li > 0) {
      dh = ConstMatMap(p + l.weights, l.out, l.in).transpose() * dpre;
    }
  }

  if (c != 0.0) {
    for (size_t i = 0; i < params_.size(); ++i) g[i] += 2.0 * c * p[i];
  }
  return loss;
}

LossBreakdown Network::SgdStep(std::span<const TrainingSample> batch,
                               double lr, double c) {
  GX_REQUIRE(lr >= 0.0, "learning rate must be non-negative");
  std::vector<double> grad;
  LossBreakdown loss = Loss(batch, c, &grad);
  if (!std::isfinite(loss.total())) {
    throw TrainingError("non-finite loss at step " + std::to_string(step_));
  }
  for (double gi : grad) {
    if (!std::isfinite(gi)) {
      throw TrainingError("non-finite gradient at step " +
                          std::to_string(step_));
    }
  }
  if (lr != 0.0) {
    for (size_t i = 0; i < params_.size(); ++i) params_[i] -= lr * grad[i];
  }
  ++step_;
  return loss;
}

double Network::SquaredNorm() const {
  return ConstVecMap(params_.data(), params_.size()).squaredNorm();
}

// Layout (little-endian): magic[8], u32 version, u32 game, u32 n_hidden,
// u32 hidden[n_hidden], u32 input_size, u32 num_actions, u64 step,
// u64 n_params, f64 params[n_params], u64 fnv1a(params).
void Network::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  WritePod<uint32_t>(out, kFormatVersion);
  WritePod<uint32_t>(out, static_cast<uint32_t>(shape_.game));
  WritePod<uint32_t>(out, static_cast<uint32_t>(shape_.hidden.size()));
  for (int w : shape_.hidden) WritePod<uint32_t>(out, static_cast<uint32_t>(w));
  WritePod<uint32_t>(out, static_cast<uint32_t>(input_size_));
  WritePod<uint32_t>(out, static_cast<uint32_t>(num_actions()));
  WritePod<uint64_t>(out, step_);
  WritePod<uint64_t>(out, params_.size());
  const size_t bytes = params_.size() * sizeof(double);
  out.write(reinterpret_cast<const char*>(params_.data()),
            static_cast<std::streamsize>(bytes));
  WritePod<uint64_t>(out, Fnv1a(params_.data(), bytes));
  if (!out) throw IoError("failed writing checkpoint '" + path + "'");
}

Network Network::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("'" + path + "' is not a network checkpoint");
  }
  const auto version = ReadPod<uint32_t>(in, path);
  if (version != kFormatVersion) {
    throw IoError("checkpoint '" + path + "' has format version " +
                  std::to_string(version) + ", expected " +
                  std::to_string(kFormatVersion));
  }
  const auto game = ReadPod<uint32_t>(in, path);
  if (game > static_cast<uint32_t>(GameId::kTicTacToe)) {
    throw IoError("checkpoint '" + path + "' names an unknown game");
  }
  NetworkShape shape;
  shape.game = static_cast<GameId>(game);
  const auto n_hidden = ReadPod<uint32_t>(in, path);
  if (n_hidden == 0 || n_hidden > 64) {
    throw IoError("checkpoint '" + path + "' has a corrupt header");
  }
  shape.hidden.clear();
  for (uint32_t i = 0; i < n_hidden; ++i) {
    const auto w = ReadPod<uint32_t>(in, path);
    if (w == 0 || w > (1u << 16)) {
      throw IoError("checkpoint '" + path + "' has a corrupt header");
    }
    shape.hidden.push_back(static_cast<int>(w));
  }
  const auto input_size = ReadPod<uint32_t>(in, path);
  const auto actions = ReadPod<uint32_t>(in, path);
  const auto step = ReadPod<uint64_t>(in, path);
  const auto n_params = ReadPod<uint64_t>(in, path);

  Network net(shape, 0);
  if (input_size != static_cast<uint32_t>(net.input_size_) ||
      actions != static_cast<uint32_t>(net.num_actions()) ||
      n_params != net.params_.size()) {
    throw IoError("checkpoint '" + path +
                  "' does not match its declared architecture");
  }
  const size_t bytes = net.params_.size() * sizeof(double);
  in.read(reinterpret_cast<char*>(net.params_.data()),
          static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("checkpoint '" + path + "' is truncated");
  const auto checksum = ReadPod<uint64_t>(in, path);
  if (checksum != Fnv1a(net.params_.data(), bytes)) {
    throw IoError("checkpoint '" + path + "' failed its checksum");
  }
  net.step_ = step;
  return net;
}

Network Network::LoadCompatible(const std::string& path,
                                const NetworkShape& expected) {
  Network net = Load(path);
  if (!(net.shape() == expected)) {
    throw IoError("checkpoint '" + path +
                  "' architecture differs from the configured network");
  }
  return net;
}

}  // namespace goexploit
