// Copyright 2026 The mif-wlstm Authors
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

#pragma once

#include "mif/data.hpp"
#include "mif/motion.hpp"
#include "mif/warp.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace mif {

/// Observed-percentage buckets of the model bank.
inline constexpr std::array<int, 4> kObservedBuckets{0, 25, 50, 75};

struct TrainConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 100;
  int batch_size = 1;
  std::uint64_t rng_seed = 0;
  int embed_dim = 128;
  int hidden_dim = 128;
  /// Global gradient-norm clip per update; 0 disables.
  double grad_clip = 0.0;

  void validate() const;
};

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

/// One supervised pair: nominal full trajectory and the recorded trajectory.
struct TrainingExample {
  NominalFullTrajectory nominal;
  Trajectory truth;
};

/// Number of observed frames for a trajectory of `length` frames at the
/// given bucket. Bucket 0 observes the first position and displacement.
int observed_frames(int length, int percent_observed);

/// Splits at the bucket and continues the observation toward the recorded
/// endpoint in the remaining number of frames. Empty for trajectories
/// shorter than three frames.
std::optional<TrainingExample> make_training_example(const Trajectory& trajectory,
                                                     int percent_observed);

struct TrainResult {
  WarpModel model;
  /// Mean corpus loss before training followed by one entry per epoch.
  std::vector<double> loss_curve;
};

/// Trains one bucket model with Adam, one trajectory per gradient
/// evaluation and `batch_size` evaluations per update.
TrainResult train(const std::vector<TrajectoryRecord>& corpus, int percent_observed,
                  const TrainConfig& cfg);

/// Mean warp loss of `model` over the corpus examples at the bucket.
double corpus_loss(const WarpModel& model, const std::vector<TrajectoryRecord>& corpus,
                   int percent_observed);

using ModelBank = std::map<int, WarpModel>;

/// Bucket whose fraction is nearest observed/(observed + remaining); ties
/// go to the lower bucket.
int select_bucket(const ModelBank& bank, int observed_len, int estimated_steps);
const WarpModel& select_model(const ModelBank& bank, int observed_len, int estimated_steps);

/// Warp model as a motion model: builds the nominal trajectory, picks the
/// bank model by observation ratio and returns the warped continuation.
class WarpMotionModel final : public MotionModel {
 public:
  explicit WarpMotionModel(ModelBank bank);
  Trajectory predict(const Trajectory& history, const Position& goal, int steps) const override;
  const ModelBank& bank() const { return bank_; }

 private:
  ModelBank bank_;
};

struct Checkpoint {
  WarpModel model;
  int bucket = 0;
  TrainConfig config;
};

inline constexpr int kCheckpointVersion = 1;

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// File name of a bucket checkpoint inside a bank directory.
std::string checkpoint_file_name(int bucket);
/// Loads every bucket checkpoint present in `dir`; throws if none is.
ModelBank load_model_bank(const std::filesystem::path& dir);

}  // namespace mif
