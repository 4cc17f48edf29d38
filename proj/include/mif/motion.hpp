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

#include "mif/trajectory.hpp"

#include <random>

namespace mif {

using Rng = std::mt19937_64;

/// Motion model f(x_1:t, g, T_g): predicts the next `steps` positions of a
/// pedestrian heading for `goal`.
class MotionModel {
 public:
  virtual ~MotionModel() = default;
  /// Returns exactly `steps` finite positions.
  virtual Trajectory predict(const Trajectory& history, const Position& goal, int steps) const = 0;
};

/// Straight line from the last observed position to the goal, equally spaced,
/// ending exactly on the goal.
Trajectory ilm_predict(const Trajectory& history, const Position& goal, int steps);

/// Intention-aware linear model.
class LinearIntentionModel final : public MotionModel {
 public:
  Trajectory predict(const Trajectory& history, const Position& goal, int steps) const override {
    return ilm_predict(history, goal, steps);
  }
};

struct TimeToGoOptions {
  /// Speed floor in meters per frame.
  double min_speed = 1e-6;
  int max_steps = 1000;
};

/// Uniform sample over the closed square.
Position sample_goal_position(const GoalRegion& region, Rng& rng);

/// ceil(distance to goal / average observed step), clamped to [1, max_steps].
int time_to_go(const Trajectory& history, const Position& goal, const TimeToGoOptions& options = {});

/// Goal sampling, time-to-go and motion model composed: a fresh goal is drawn
/// inside `region` on every call.
Trajectory predict_with_intention(const MotionModel& model, const Trajectory& history,
                                  const GoalRegion& region, Rng& rng,
                                  const TimeToGoOptions& options = {});

/// Holds the last position (or truncates) so the result has exactly `length` frames.
Trajectory align_horizon(const Trajectory& traj, Eigen::Index length);

}  // namespace mif
