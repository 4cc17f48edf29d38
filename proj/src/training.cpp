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

#include "mif/training.hpp"

#include "mif/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mif {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("train config: learning_rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("train config: invalid Adam constants");
  }
  if (epochs < 0 || batch_size < 1 || embed_dim < 1 || hidden_dim < 1 || !(grad_clip >= 0.0)) {
    throw std::invalid_argument("train config: invalid sizes");
  }
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate}, {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},                 {"epsilon", cfg.epsilon},
          {"epochs", cfg.epochs},               {"batch_size", cfg.batch_size},
          {"rng_seed", cfg.rng_seed},           {"embed_dim", cfg.embed_dim},
          {"hidden_dim", cfg.hidden_dim},       {"grad_clip", cfg.grad_clip}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.beta1 = j.value("beta1", cfg.beta1);
  cfg.beta2 = j.value("beta2", cfg.beta2);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
  cfg.embed_dim = j.value("embed_dim", cfg.embed_dim);
  cfg.hidden_dim = j.value("hidden_dim", cfg.hidden_dim);
  cfg.grad_clip = j.value("grad_clip", cfg.grad_clip);
  cfg.validate();
  return cfg;
}

int observed_frames(int length, int percent_observed) {
  const int raw = percent_observed == 0 ? 2 : (length * percent_observed) / 100;
  return std::clamp(raw, 2, std::max(2, length - 1));
}

std::optional<TrainingExample> make_training_example(const Trajectory& trajectory,
                                                     int percent_observed) {
  const int length = static_cast<int>(trajectory.rows());
  if (length < 3) {
    return std::nullopt;
  }
  const int observed = observed_frames(length, percent_observed);
  return TrainingExample{make_nominal(trajectory.head(observed), trajectory.back(), length - observed),
                         trajectory};
}

namespace {

void check_bucket(int percent_observed) {
  if (std::find(kObservedBuckets.begin(), kObservedBuckets.end(), percent_observed) ==
      kObservedBuckets.end()) {
    throw std::invalid_argument("percent_observed must be one of 0, 25, 50, 75");
  }
}

std::vector<TrainingExample> build_examples(const std::vector<TrajectoryRecord>& corpus,
                                            int percent_observed) {
  check_bucket(percent_observed);
  std::vector<TrainingExample> examples;
  examples.reserve(corpus.size());
  for (const auto& rec : corpus) {
    if (!rec.goal_region_id) {
      throw std::invalid_argument("train: record " + rec.pedestrian_id + " has no goal label");
    }
    if (auto ex = make_training_example(rec.trajectory, percent_observed)) {
      examples.push_back(std::move(*ex));
    }
  }
  if (examples.empty()) {
    throw std::invalid_argument("train: corpus has no usable trajectories");
  }
  return examples;
}

double mean_loss(const WarpModel& model, const std::vector<TrainingExample>& examples) {
  double total = 0.0;
  for (const auto& ex : examples) {
    total += warp_loss(warp_forward(model, ex.nominal).warped, ex.truth);
  }
  return total / static_cast<double>(examples.size());
}

}  // namespace

double corpus_loss(const WarpModel& model, const std::vector<TrajectoryRecord>& corpus,
                   int percent_observed) {
  return mean_loss(model, build_examples(corpus, percent_observed));
}

TrainResult train(const std::vector<TrajectoryRecord>& corpus, int percent_observed,
                  const TrainConfig& cfg) {
  cfg.validate();
  const auto examples = build_examples(corpus, percent_observed);

  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Index frames = 0;
  for (const auto& ex : examples) {
    center += ex.truth.positions().colwise().sum().transpose();
    frames += ex.truth.rows();
  }
  center /= static_cast<double>(frames);
  double spread = 0.0;
  for (const auto& ex : examples) {
    spread += (ex.truth.positions().rowwise() - center.transpose()).squaredNorm();
  }
  spread = std::sqrt(spread / (2.0 * static_cast<double>(frames)));

  Rng rng(cfg.rng_seed);
  TrainResult result;
  result.model = WarpModel::initialized(cfg.embed_dim, cfg.hidden_dim, rng);
  result.model.input_center = center;
  result.model.input_scale = spread > 1e-9 ? spread : 1.0;

  Adam adam(result.model, {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon});
  result.loss_curve.push_back(mean_loss(result.model, examples));

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(result.model.parameter_count());
      for (std::size_t k = begin; k < end; ++k) {
        const auto& ex = examples[order[k]];
        grad += backward(result.model, ex.nominal, ex.truth).flatten();
      }
      grad /= static_cast<double>(end - begin);
      if (cfg.grad_clip > 0.0) {
        const double norm = grad.norm();
        if (norm > cfg.grad_clip) {
          grad *= cfg.grad_clip / norm;
        }
      }
      WarpModel grad_model = WarpModel::zeros(cfg.embed_dim, cfg.hidden_dim);
      grad_model.unflatten(grad);
      adam.step(result.model, grad_model);
    }
    if (!result.model.all_finite()) {
      throw DivergenceError("train: parameters became non-finite at epoch " +
                            std::to_string(epoch + 1));
    }
    result.loss_curve.push_back(mean_loss(result.model, examples));
  }
  return result;
}

int select_bucket(const ModelBank& bank, int observed_len, int estimated_steps) {
  if (bank.empty()) {
    throw std::invalid_argument("select_model: empty model bank");
  }
  if (observed_len < 1 || estimated_steps < 1) {
    throw std::invalid_argument("select_model: lengths must be >= 1");
  }
  const double ratio =
      static_cast<double>(observed_len) / static_cast<double>(observed_len + estimated_steps);
  int best = bank.begin()->first;
  double best_gap = std::abs(best / 100.0 - ratio);
  for (const auto& [bucket, model] : bank) {
    const double gap = std::abs(bucket / 100.0 - ratio);
    if (gap < best_gap) {
      best = bucket;
      best_gap = gap;
    }
  }
  return best;
}

const WarpModel& select_model(const ModelBank& bank, int observed_len, int estimated_steps) {
  return bank.at(select_bucket(bank, observed_len, estimated_steps));
}

WarpMotionModel::WarpMotionModel(ModelBank bank) : bank_(std::move(bank)) {
  if (bank_.empty()) {
    throw std::invalid_argument("WarpMotionModel: empty model bank");
  }
}

Trajectory WarpMotionModel::predict(const Trajectory& history, const Position& goal,
                                    int steps) const {
  const auto& model = select_model(bank_, static_cast<int>(history.rows()), steps);
  const auto nominal = make_nominal(history, goal, steps);
  return warp_forward(model, nominal).warped.tail(steps);
}

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint) {
  const auto& model = checkpoint.model;
  nlohmann::json params = nlohmann::json::array();
  model.visit([&params](std::string_view name, const WarpModel::Matrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        data.push_back(m(r, c));
      }
    }
    params.push_back({{"name", std::string(name)}, {"rows", m.rows()}, {"cols", m.cols()},
                      {"data", std::move(data)}});
  });
  return {{"format", "mif-warp-checkpoint"},
          {"version", kCheckpointVersion},
          {"embed_dim", model.embed_dim},
          {"hidden_dim", model.hidden_dim},
          {"bucket", checkpoint.bucket},
          {"input_center", {model.input_center.x(), model.input_center.y()}},
          {"input_scale", model.input_scale},
          {"train_config", train_config_to_json(checkpoint.config)},
          {"parameters", std::move(params)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != "mif-warp-checkpoint") {
    throw std::invalid_argument("checkpoint: unrecognized format");
  }
  if (j.at("version").get<int>() != kCheckpointVersion) {
    throw std::invalid_argument("checkpoint: unsupported version");
  }
  Checkpoint cp;
  cp.bucket = j.at("bucket").get<int>();
  cp.config = train_config_from_json(j.at("train_config"));
  cp.model = WarpModel::zeros(j.at("embed_dim").get<int>(), j.at("hidden_dim").get<int>());
  const auto center = j.at("input_center").get<std::vector<double>>();
  if (center.size() != 2) {
    throw std::invalid_argument("checkpoint: input_center must have two entries");
  }
  cp.model.input_center = Eigen::Vector2d(center[0], center[1]);
  cp.model.input_scale = j.at("input_scale").get<double>();

  std::map<std::string, const nlohmann::json*> by_name;
  for (const auto& p : j.at("parameters")) {
    by_name[p.at("name").get<std::string>()] = &p;
  }
  cp.model.visit([&by_name](std::string_view name, WarpModel::Matrix& m) {
    const auto it = by_name.find(std::string(name));
    if (it == by_name.end()) {
      throw std::invalid_argument("checkpoint: missing tensor " + std::string(name));
    }
    const auto& p = *it->second;
    const auto data = p.at("data").get<std::vector<double>>();
    if (p.at("rows").get<Eigen::Index>() != m.rows() ||
        p.at("cols").get<Eigen::Index>() != m.cols() ||
        static_cast<Eigen::Index>(data.size()) != m.size()) {
      throw std::invalid_argument("checkpoint: shape mismatch for " + std::string(name));
    }
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = data[k++];
      }
    }
  });
  if (!cp.model.all_finite()) {
    throw std::invalid_argument("checkpoint: non-finite parameters");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_text_atomic(path, checkpoint_to_json(checkpoint).dump() + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(nlohmann::json::parse(read_text(path)));
}

std::string checkpoint_file_name(int bucket) {
  return "warp_p" + std::to_string(bucket) + ".json";
}

ModelBank load_model_bank(const std::filesystem::path& dir) {
  ModelBank bank;
  for (int bucket : kObservedBuckets) {
    const auto path = dir / checkpoint_file_name(bucket);
    if (std::filesystem::exists(path)) {
      auto cp = load_checkpoint(path);
      if (cp.bucket != bucket) {
        throw std::invalid_argument("checkpoint " + path.string() + " holds bucket " +
                                    std::to_string(cp.bucket));
      }
      bank.emplace(bucket, std::move(cp.model));
    }
  }
  if (bank.empty()) {
    throw std::invalid_argument("no checkpoints found in " + dir.string());
  }
  return bank;
}

}  // namespace mif
