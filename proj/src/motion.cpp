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

#include "mif/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace mif {

Trajectory ilm_predict(const Trajectory& history, const Position& goal, int steps) {
  if (steps < 1) {
    throw std::invalid_argument("ilm_predict: steps must be >= 1");
  }
  const Position start = history.back();
  const Position delta = goal - start;
  Path out(steps, 2);
  for (int k = 1; k < steps; ++k) {
    out.row(k - 1) = (start + delta * (static_cast<double>(k) / steps)).transpose();
  }
  out.row(steps - 1) = goal.transpose();
  return Trajectory(std::move(out), history.frame_interval());
}

Position sample_goal_position(const GoalRegion& region, Rng& rng) {
  const double h = region.half_width;
  if (h == 0.0) {
    return region.center;
  }
  std::uniform_real_distribution<double> u(-h, h);
  const double dx = u(rng);
  const double dy = u(rng);
  return clamp_into(region, region.center + Position(dx, dy));
}

int time_to_go(const Trajectory& history, const Position& goal, const TimeToGoOptions& options) {
  const double speed = std::max(average_step_length(history), options.min_speed);
  const double steps = std::ceil((goal - history.back()).norm() / speed);
  if (!(steps < static_cast<double>(options.max_steps))) {
    return options.max_steps;
  }
  return std::max(1, static_cast<int>(steps));
}

Trajectory predict_with_intention(const MotionModel& model, const Trajectory& history,
                                  const GoalRegion& region, Rng& rng,
                                  const TimeToGoOptions& options) {
  const Position goal = sample_goal_position(region, rng);
  const int steps = time_to_go(history, goal, options);
  Trajectory out = model.predict(history, goal, steps);
  if (out.rows() != steps) {
    throw std::logic_error("motion model returned " + std::to_string(out.rows()) +
                           " frames, expected " + std::to_string(steps));
  }
  return out;
}

Trajectory align_horizon(const Trajectory& traj, Eigen::Index length) {
  if (length < 1) {
    throw std::invalid_argument("align_horizon: length must be >= 1");
  }
  if (traj.rows() >= length) {
    return traj.head(length);
  }
  Path out(length, 2);
  out.topRows(traj.rows()) = traj.positions();
  out.bottomRows(length - traj.rows()).rowwise() = traj.positions().row(traj.rows() - 1);
  return Trajectory(std::move(out), traj.frame_interval());
}

}  // namespace mif
