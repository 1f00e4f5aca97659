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

#ifndef GOEXPLOIT_LEARNER_H_
#define GOEXPLOIT_LEARNER_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "goexploit/archive.h"
#include "goexploit/config.h"
#include "goexploit/model.h"
#include "goexploit/replay.h"
#include "goexploit/selfplay.h"

namespace goexploit {

struct StepReport {
  int step = 0;
  LossBreakdown loss;  // mean over the step's minibatches, before each update
  size_t samples = 0;
  size_t trajectories = 0;
  size_t archive_size = 0;
  size_t unique_archive_keys = 0;
};

struct CheckpointEntry {
  int step = 0;
  std::string path;  // relative to the run directory
};

struct RunManifest {
  std::string run_dir;
  RunConfig config;
  std::vector<CheckpointEntry> checkpoints;
  std::string metrics = "metrics.csv";
  std::string trajectory_log;  // empty when disabled
  std::string status;          // running, complete or failed
  std::string error;
};

// Reads <run_dir>/manifest.json (or a manifest file path).
RunManifest ReadManifest(const std::string& path);

// One full training run: learner, replay buffer, actors and archive. Writes
// into `out_dir`:
//   manifest.json         config echo, checkpoint list, status
//   metrics.csv           one row per learning step
//   checkpoints/          ckpt_<step>.bin at step 0, every interval, the end
//   trajectories.jsonl    one record per consumed trajectory (optional)
//   archive_keys.csv      final archive contents, when there is an archive
class TrainingRun {
 public:
  TrainingRun(RunConfig cfg, std::string out_dir);
  ~TrainingRun();

  TrainingRun(const TrainingRun&) = delete;
  TrainingRun& operator=(const TrainingRun&) = delete;

  // Runs all learning steps. On failure the manifest is marked failed, a
  // checkpoint of the current parameters is dumped, and the error rethrown.
  RunManifest Run();

  // Called after each learning step; for progress output.
  void set_step_callback(std::function<void(const StepReport&)> cb) {
    on_step_ = std::move(cb);
  }

  const RunConfig& config() const { return cfg_; }
  const std::vector<StepReport>& reports() const { return reports_; }
  const Network& network() const { return *net_; }
  const Archive* archive() const { return archive_.get(); }
  const ReplayBuffer& replay() const { return replay_; }
  int archive_actors_started() const { return archive_actors_started_; }
  uint64_t archive_matches() const { return archive_matches_; }
  // Sum of samples ingested and of the lengths of consumed trajectories;
  // equal by construction.
  uint64_t samples_ingested() const { return samples_ingested_; }
  uint64_t trajectory_lengths() const { return trajectory_lengths_; }

 private:
  struct Collector;
  class DeterministicCollector;
  class ThreadedCollector;

  StepReport LearnerStep(Collector& collector);
  void Ingest(const Trajectory& traj, std::vector<GameState>* visited);
  void SaveCheckpoint(int step);
  void WriteManifest(const std::string& status, const std::string& error);

  RunConfig cfg_;
  std::string out_dir_;
  const Game& game_;
  std::shared_ptr<Network> net_;
  std::unique_ptr<Archive> archive_;
  ReplayBuffer replay_;
  ParamsSource params_;
  Rng rng_;
  std::vector<StepReport> reports_;
  std::vector<CheckpointEntry> checkpoints_;
  std::ofstream metrics_;
  std::ofstream trajectory_log_;
  std::function<void(const StepReport&)> on_step_;
  int archive_actors_started_ = 0;
  uint64_t archive_matches_ = 0;
  uint64_t samples_ingested_ = 0;
  uint64_t trajectory_lengths_ = 0;
};

// Builds a TrainingRun and runs it.
RunManifest RunTraining(const RunConfig& cfg, const std::string& out_dir);

}  // namespace goexploit

#endif  // GOEXPLOIT_LEARNER_H_
