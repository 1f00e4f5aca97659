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

#include "goexploit/learner.h"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <thread>

#include "json.hpp"

namespace goexploit {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Seed streams; every component draws from its own.
constexpr uint64_t kNetworkStream = 0;
constexpr uint64_t kLearnerStream = 1;
constexpr uint64_t kArchiveStream = 2;
constexpr uint64_t kTrainingActorStream = 100;
constexpr uint64_t kArchiveActorStream = 10000;

std::string CheckpointName(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ckpt_%06d.bin", step);
  return std::string("checkpoints/") + buf;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

struct TrainingRun::Collector {
  virtual ~Collector() = default;
  virtual Trajectory Next() = 0;
  virtual void Stop() {}
  virtual uint64_t archive_matches() const = 0;
};

// Round-robin over [training actors..., archive actors...] on the calling
// thread. An archive actor's turn plays one whole match.
class TrainingRun::DeterministicCollector : public TrainingRun::Collector {
 public:
  DeterministicCollector(std::vector<std::unique_ptr<TrainingActor>> training,
                         std::vector<std::unique_ptr<ArchiveActor>> archive)
      : training_(std::move(training)), archive_(std::move(archive)) {}

  Trajectory Next() override {
    const size_t slots = training_.size() + archive_.size();
    while (true) {
      const size_t slot = cursor_++ % slots;
      if (slot < training_.size()) return training_[slot]->Next();
      archive_[slot - training_.size()]->PlayOneMatch();
      ++matches_;
    }
  }

  uint64_t archive_matches() const override { return matches_; }

 private:
  std::vector<std::unique_ptr<TrainingActor>> training_;
  std::vector<std::unique_ptr<ArchiveActor>> archive_;
  uint64_t cursor_ = 0;
  uint64_t matches_ = 0;
};

class TrainingRun::ThreadedCollector : public TrainingRun::Collector {
 public:
  ThreadedCollector(std::vector<std::unique_ptr<TrainingActor>> training,
                    std::vector<std::unique_ptr<ArchiveActor>> archive,
                    size_t queue_capacity, Backpressure backpressure,
                    double timeout_s)
      : training_(std::move(training)),
        archive_(std::move(archive)),
        queue_(queue_capacity, backpressure),
        timeout_(static_cast<int64_t>(timeout_s * 1000.0)) {
    for (auto& actor : training_) {
      threads_.emplace_back([this, a = actor.get()] {
        Guard([&] {
          while (!stop_.load()) {
            if (!queue_.Push(a->Next())) break;
          }
        });
      });
    }
    for (auto& actor : archive_) {
      threads_.emplace_back([this, a = actor.get()] {
        Guard([&] {
          while (!stop_.load()) {
            a->PlayOneMatch();
            ++matches_;
          }
        });
      });
    }
  }

  ~ThreadedCollector() override { Stop(); }

  Trajectory Next() override {
    std::optional<Trajectory> traj = queue_.Pop(timeout_);
    if (traj) return std::move(*traj);
    {
      std::lock_guard<std::mutex> lock(error_mu_);
      if (error_) std::rethrow_exception(error_);
    }
    throw TrainingError("actor starvation: no trajectory within " +
                        std::to_string(timeout_.count()) + " ms");
  }

  void Stop() override {
    stop_.store(true);
    queue_.Close();
    for (std::thread& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  uint64_t archive_matches() const override { return matches_.load(); }

 private:
  template <typename F>
  void Guard(F&& body) {
    try {
      body();
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(error_mu_);
        if (!error_) error_ = std::current_exception();
      }
      queue_.Close();
    }
  }

  std::vector<std::unique_ptr<TrainingActor>> training_;
  std::vector<std::unique_ptr<ArchiveActor>> archive_;
  BlockingQueue<Trajectory> queue_;
  std::chrono::milliseconds timeout_;
  std::atomic<bool> stop_{false};
  std::atomic<uint64_t> matches_{0};
  std::mutex error_mu_;
  std::exception_ptr error_;
  std::vector<std::thread> threads_;
};

TrainingRun::TrainingRun(RunConfig cfg, std::string out_dir)
    : cfg_(std::move(cfg)),
      out_dir_(std::move(out_dir)),
      game_(GetGame(cfg_.game)),
      net_(std::make_shared<Network>(cfg_.network_shape(),
                                     DeriveSeed(cfg_.seed, kNetworkStream))),
      replay_(cfg_.replay_capacity),
      params_(std::make_shared<const Network>(*net_)),
      rng_(DeriveSeed(cfg_.seed, kLearnerStream)) {
  cfg_.Validate();
  if (cfg_.archive.enabled) {
    archive_ = std::make_unique<Archive>(
        game_, cfg_.archive.type, cfg_.archive.capacity, game_.InitialState(),
        DeriveSeed(cfg_.seed, kArchiveStream));
  }
}

TrainingRun::~TrainingRun() = default;

void TrainingRun::Ingest(const Trajectory& traj,
                         std::vector<GameState>* visited) {
  for (TrainingSample& s : traj.ToSamples(game_)) replay_.Add(std::move(s));
  samples_ingested_ += traj.steps.size();
  trajectory_lengths_ += traj.steps.size();
  if (visited != nullptr) {
    for (const TrajectoryStep& step : traj.steps) visited->push_back(step.state);
  }
  if (trajectory_log_.is_open()) {
    Json rec;
    rec["id"] = traj.id;
    rec["step"] = static_cast<int>(reports_.size()) + 1;
    rec["origin"] = OriginName(traj.origin);
    rec["start_ply"] = traj.start_state.ply;
    rec["length"] = traj.steps.size();
    rec["z"] = traj.outcome.value;
    Json keys = Json::array();
    for (const TrajectoryStep& step : traj.steps) {
      keys.push_back(KeyOf(step.state).ToString());
    }
    rec["keys"] = std::move(keys);
    trajectory_log_ << rec.dump() << '\n';
  }
}

StepReport TrainingRun::LearnerStep(Collector& collector) {
  StepReport report;
  report.step = static_cast<int>(reports_.size()) + 1;
  const bool learner_writes_archive =
      archive_ != nullptr && !cfg_.archive.use_search_states;
  std::vector<GameState> visited;
  while (report.samples < static_cast<size_t>(cfg_.learner.b_step)) {
    Trajectory traj = collector.Next();
    Ingest(traj, learner_writes_archive ? &visited : nullptr);
    report.samples += traj.steps.size();
    ++report.trajectories;
  }
  if (learner_writes_archive) {
    archive_->Update(visited, ArchiveWriter::kLearner);
  }

  for (int i = 0; i < cfg_.learner.num_minibatches; ++i) {
    std::vector<TrainingSample> batch =
        replay_.SampleBatch(cfg_.learner.minibatch_size, rng_);
    LossBreakdown l = net_->SgdStep(batch, cfg_.learner.lr, cfg_.learner.c);
    report.loss.value += l.value / cfg_.learner.num_minibatches;
    report.loss.policy += l.policy / cfg_.learner.num_minibatches;
    report.loss.l2 += l.l2 / cfg_.learner.num_minibatches;
  }
  net_->set_step(report.step);
  params_.Publish(std::make_shared<const Network>(*net_));

  if (archive_) {
    ArchiveStats stats = archive_->Stats();
    report.archive_size = stats.size;
    report.unique_archive_keys = stats.unique_keys;
  }
  return report;
}

void TrainingRun::SaveCheckpoint(int step) {
  const std::string rel = CheckpointName(step);
  net_->Save((fs::path(out_dir_) / rel).string());
  checkpoints_.push_back({step, rel});
}

void TrainingRun::WriteManifest(const std::string& status,
                                const std::string& error) {
  Json j;
  j["format"] = "goexploit-run";
  j["version"] = 1;
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  j["seed"] = cfg_.seed;
  j["config"] = Json::parse(RunConfigToJson(cfg_));
  Json ckpts = Json::array();
  for (const CheckpointEntry& c : checkpoints_) {
    ckpts.push_back({{"step", c.step}, {"path", c.path}});
  }
  j["checkpoints"] = std::move(ckpts);
  j["metrics"] = "metrics.csv";
  j["trajectory_log"] = cfg_.trajectory_log ? "trajectories.jsonl" : "";
  const fs::path tmp = fs::path(out_dir_) / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError(tmp.string() + ": cannot write");
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, fs::path(out_dir_) / "manifest.json");
}

RunManifest TrainingRun::Run() {
  std::error_code ec;
  fs::create_directories(fs::path(out_dir_) / "checkpoints", ec);
  if (ec) throw IoError(out_dir_ + ": cannot create run directory");
  metrics_.open(fs::path(out_dir_) / "metrics.csv", std::ios::trunc);
  if (!metrics_) throw IoError(out_dir_ + "/metrics.csv: cannot write");
  metrics_ << "step,loss_total,loss_value,loss_policy,samples,trajectories,"
              "archive_size,unique_archive_keys\n";
  if (cfg_.trajectory_log) {
    trajectory_log_.open(fs::path(out_dir_) / "trajectories.jsonl",
                         std::ios::trunc);
    if (!trajectory_log_) {
      throw IoError(out_dir_ + "/trajectories.jsonl: cannot write");
    }
  }

  std::vector<std::unique_ptr<TrainingActor>> training;
  const uint64_t stride = cfg_.actors.training;
  for (int i = 0; i < cfg_.actors.training; ++i) {
    training.push_back(std::make_unique<TrainingActor>(
        game_, cfg_.selfplay, archive_.get(), params_,
        DeriveSeed(cfg_.seed, kTrainingActorStream + i), i, stride));
  }
  std::vector<std::unique_ptr<ArchiveActor>> archive_actors;
  if (archive_ && cfg_.archive.use_search_states) {
    for (int i = 0; i < cfg_.actors.archive; ++i) {
      archive_actors.push_back(std::make_unique<ArchiveActor>(
          game_, cfg_.selfplay, *archive_, params_,
          DeriveSeed(cfg_.seed, kArchiveActorStream + i)));
    }
  }
  archive_actors_started_ = static_cast<int>(archive_actors.size());

  SaveCheckpoint(0);
  WriteManifest("running", "");

  std::unique_ptr<Collector> collector;
  if (cfg_.actors.deterministic) {
    collector = std::make_unique<DeterministicCollector>(
        std::move(training), std::move(archive_actors));
  } else {
    collector = std::make_unique<ThreadedCollector>(
        std::move(training), std::move(archive_actors),
        cfg_.actors.queue_capacity, cfg_.actors.backpressure,
        cfg_.learner.starvation_timeout_s);
  }

  try {
    for (int step = 1; step <= cfg_.total_steps; ++step) {
      StepReport r = LearnerStep(*collector);
      reports_.push_back(r);
      metrics_ << r.step << ',' << FormatDouble(r.loss.total()) << ','
               << FormatDouble(r.loss.value) << ','
               << FormatDouble(r.loss.policy) << ',' << r.samples << ','
               << r.trajectories << ',' << r.archive_size << ','
               << r.unique_archive_keys << '\n';
      metrics_.flush();
      if (step % cfg_.learner.checkpoint_interval == 0 ||
          step == cfg_.total_steps) {
        SaveCheckpoint(step);
        WriteManifest("running", "");
      }
      if (on_step_) on_step_(r);
    }
  } catch (const std::exception& e) {
    collector->Stop();
    archive_matches_ = collector->archive_matches();
    const int step = static_cast<int>(reports_.size()) + 1;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "checkpoints/failed_%06d.bin", step);
    try {
      net_->Save((fs::path(out_dir_) / buf).string());
    } catch (const std::exception&) {
    }
    metrics_.flush();
    trajectory_log_.flush();
    WriteManifest("failed", e.what());
    throw;
  }
  collector->Stop();
  archive_matches_ = collector->archive_matches();
  trajectory_log_.flush();
  if (archive_) {
    std::ofstream keys(fs::path(out_dir_) / "archive_keys.csv");
    archive_->DumpKeys(keys);
  }
  WriteManifest("complete", "");
  return ReadManifest(out_dir_);
}

RunManifest ReadManifest(const std::string& path) {
  fs::path file(path);
  if (fs::is_directory(file)) file /= "manifest.json";
  const std::string text = ReadTextFile(file.string());
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("config")) {
    throw IoError(file.string() + ": not a run manifest");
  }
  RunManifest m;
  m.run_dir = file.parent_path().string();
  m.config = ParseRunConfig(j["config"].dump());
  for (const Json& c : j.value("checkpoints", Json::array())) {
    m.checkpoints.push_back({c.at("step").get<int>(),
                             c.at("path").get<std::string>()});
  }
  m.metrics = j.value("metrics", std::string("metrics.csv"));
  m.trajectory_log = j.value("trajectory_log", std::string());
  m.status = j.value("status", std::string());
  m.error = j.value("error", std::string());
  return m;
}

RunManifest RunTraining(const RunConfig& cfg, const std::string& out_dir) {
  TrainingRun run(cfg, out_dir);
  return run.Run();
}

}  // namespace goexploit
