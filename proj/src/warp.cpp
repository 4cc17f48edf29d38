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

#include "mif/warp.hpp"

namespace mif {

NominalFullTrajectory make_nominal(const Trajectory& history, const Position& goal, int steps) {
  const Trajectory continuation = ilm_predict(history, goal, steps);
  Path path(history.rows() + continuation.rows(), 2);
  path.topRows(history.rows()) = history.positions();
  path.bottomRows(continuation.rows()) = continuation.positions();
  return {Trajectory(std::move(path), history.frame_interval()),
          static_cast<int>(history.rows())};
}

WarpResult warp_forward(const WarpModel& model, const NominalFullTrajectory& nominal) {
  if (nominal.positions.rows() < 2) {
    throw std::invalid_argument("warp_forward: nominal trajectory needs at least two frames");
  }
  Path offsets = warp_offsets(model, nominal.positions.positions());
  Path warped = nominal.positions.positions() + offsets;
  if (!warped.allFinite()) {
    throw DivergenceError("warp_forward: non-finite warped trajectory");
  }
  return {Trajectory(std::move(warped), nominal.positions.frame_interval()), std::move(offsets)};
}

double warp_loss(const Trajectory& warped, const Trajectory& ground_truth) {
  return mean_squared_error(warped.positions(), ground_truth.positions());
}

WarpModel backward(const WarpModel& model, const NominalFullTrajectory& nominal,
                   const Trajectory& ground_truth, double* loss_out) {
  return warp_gradient(model, nominal.positions.positions(), ground_truth.positions(), loss_out);
}

Adam::Adam(const WarpModel& shape, AdamConfig config)
    : config_(config),
      first_moment_(WarpModel::zeros(shape.embed_dim, shape.hidden_dim)),
      second_moment_(WarpModel::zeros(shape.embed_dim, shape.hidden_dim)) {
  if (!(config_.learning_rate > 0.0)) {
    throw std::invalid_argument("Adam: learning rate must be positive");
  }
  if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0 && config_.beta2 >= 0.0 &&
        config_.beta2 < 1.0)) {
    throw std::invalid_argument("Adam: betas must be in [0, 1)");
  }
}

void Adam::step(WarpModel& params, const WarpModel& grads) {
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;

  Eigen::VectorXd theta = params.flatten();
  const Eigen::VectorXd g = grads.flatten();
  Eigen::VectorXd m = first_moment_.flatten();
  Eigen::VectorXd v = second_moment_.flatten();
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.cwiseAbs2();
  theta.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
  first_moment_.unflatten(m);
  second_moment_.unflatten(v);
  params.unflatten(theta);
}

}  // namespace mif
