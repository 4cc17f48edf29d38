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

#include "mif/filter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mif {

void FilterConfig::validate() const {
  if (num_particles < 1) {
    throw std::invalid_argument("filter config: num_particles must be >= 1");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("filter config: tau must be positive");
  }
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0)) {
    throw std::invalid_argument("filter config: p_mutation must be in [0, 1]");
  }
  if (lookback < 1 || iterate_every < 1 || nti < 1) {
    throw std::invalid_argument("filter config: lookback, iterate_every and nti must be >= 1");
  }
  if (!(time_to_go.min_speed > 0.0) || time_to_go.max_steps < 1) {
    throw std::invalid_argument("filter config: invalid time-to-go limits");
  }
}

nlohmann::json filter_config_to_json(const FilterConfig& cfg) {
  return {{"num_particles", cfg.num_particles},
          {"tau", cfg.tau},
          {"p_mutation", cfg.p_mutation},
          {"lookback", cfg.lookback},
          {"iterate_every", cfg.iterate_every},
          {"nti", cfg.nti},
          {"min_speed", cfg.time_to_go.min_speed},
          {"max_steps", cfg.time_to_go.max_steps}};
}

FilterConfig filter_config_from_json(const nlohmann::json& j) {
  FilterConfig cfg;
  cfg.num_particles = j.value("num_particles", cfg.num_particles);
  cfg.tau = j.value("tau", cfg.tau);
  cfg.p_mutation = j.value("p_mutation", cfg.p_mutation);
  cfg.lookback = j.value("lookback", cfg.lookback);
  cfg.iterate_every = j.value("iterate_every", cfg.iterate_every);
  cfg.nti = j.value("nti", cfg.nti);
  cfg.time_to_go.min_speed = j.value("min_speed", cfg.time_to_go.min_speed);
  cfg.time_to_go.max_steps = j.value("max_steps", cfg.time_to_go.max_steps);
  cfg.validate();
  return cfg;
}

int Belief::argmax() const {
  Eigen::Index best = 0;
  probabilities.maxCoeff(&best);
  return static_cast<int>(best);
}

std::vector<Particle> init_particles(int num_intentions, int num_particles, Rng& rng) {
  if (num_intentions < 1 || num_particles < 1) {
    throw std::invalid_argument("init_particles: need m >= 1 and M >= 1");
  }
  std::uniform_int_distribution<int> pick(0, num_intentions - 1);
  std::vector<Particle> particles(static_cast<std::size_t>(num_particles));
  const double w = 1.0 / num_particles;
  for (auto& p : particles) {
    p.weight = w;
    p.intention = pick(rng);
  }
  return particles;
}

std::optional<std::vector<Trajectory>> truncated_predict(const std::vector<Particle>& particles,
                                                         const IntentionMap& map,
                                                         const Trajectory& observation,
                                                         const MotionModel& model, int lookback,
                                                         Rng& rng, const TimeToGoOptions& options) {
  if (observation.rows() <= lookback + 1) {
    return std::nullopt;
  }
  const Trajectory prefix = observation.head(observation.rows() - lookback);
  std::vector<Trajectory> out;
  out.reserve(particles.size());
  for (const auto& p : particles) {
    const Trajectory pred = predict_with_intention(model, prefix, map.region(p.intention), rng, options);
    out.push_back(align_horizon(pred, lookback));
  }
  return out;
}

bool weight_update_from_distances(std::vector<Particle>& particles,
                                  const std::vector<double>& distances, double tau) {
  if (distances.size() != particles.size()) {
    throw std::invalid_argument("weight_update: one distance per particle required");
  }
  const std::size_t n = particles.size();
  std::vector<double> log_w(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    log_w[i] = std::log(particles[i].weight) - tau * distances[i];
    if (!std::isnan(log_w[i])) {
      max_log = std::max(max_log, log_w[i]);
    }
  }
  double total = 0.0;
  if (std::isfinite(max_log)) {
    for (std::size_t i = 0; i < n; ++i) {
      log_w[i] = std::isnan(log_w[i]) ? 0.0 : std::exp(log_w[i] - max_log);
      total += log_w[i];
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    for (auto& p : particles) {
      p.weight = 1.0 / static_cast<double>(n);
    }
    return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    particles[i].weight = log_w[i] / total;
  }
  return false;
}

bool weight_update(std::vector<Particle>& particles, const std::vector<Trajectory>& truncated,
                   const Trajectory& ground_truth, double tau) {
  if (truncated.size() != particles.size()) {
    throw std::invalid_argument("weight_update: one truncated prediction per particle required");
  }
  std::vector<double> distances;
  distances.reserve(truncated.size());
  for (const auto& t : truncated) {
    distances.push_back(segment_distance(t, ground_truth));
  }
  return weight_update_from_distances(particles, distances, tau);
}

std::vector<int> systematic_offspring(const Eigen::VectorXd& weights, double u0) {
  const Eigen::Index n = weights.size();
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    return counts;
  }
  const double step = 1.0 / static_cast<double>(n);
  Eigen::Index i = 0;
  double cumulative = weights(0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double u = u0 + static_cast<double>(j) * step;
    while (cumulative < u && i < n - 1) {
      ++i;
      cumulative += weights(i);
    }
    ++counts[static_cast<std::size_t>(i)];
  }
  return counts;
}

void resample_sir(std::vector<Particle>& particles, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(particles.size());
  if (n == 0) {
    return;
  }
  Eigen::VectorXd weights(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    weights(i) = particles[static_cast<std::size_t>(i)].weight;
  }
  const double u0 = std::uniform_real_distribution<double>(0.0, 1.0 / static_cast<double>(n))(rng);
  const auto counts = systematic_offspring(weights, u0);
  std::vector<Particle> next;
  next.reserve(particles.size());
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    for (int c = 0; c < counts[i]; ++c) {
      next.push_back(Particle{w, particles[i].intention, std::nullopt});
    }
  }
  particles = std::move(next);
}

int mutate_intentions(std::vector<Particle>& particles, double p_mutation, int num_intentions,
                      Rng& rng) {
  if (num_intentions < 2 || p_mutation <= 0.0) {
    return 0;
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> other(0, num_intentions - 2);
  int mutated = 0;
  for (auto& p : particles) {
    if (coin(rng) < p_mutation) {
      int next = other(rng);
      if (next >= p.intention) {
        ++next;
      }
      p.intention = next;
      ++mutated;
    }
  }
  return mutated;
}

Belief aggregate_belief(const std::vector<Particle>& particles, int num_intentions) {
  Belief b{Eigen::VectorXd::Zero(num_intentions)};
  for (const auto& p : particles) {
    if (p.intention < 0 || p.intention >= num_intentions) {
      throw std::out_of_range("aggregate_belief: particle intention out of range");
    }
    b.probabilities(p.intention) += p.weight;
  }
  return b;
}

double effective_sample_size(const std::vector<Particle>& particles) {
  double sq = 0.0;
  for (const auto& p : particles) {
    sq += p.weight * p.weight;
  }
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

std::vector<int> top_intentions(const Belief& belief, int nti) {
  const int m = belief.size();
  if (nti < 1 || nti > m) {
    throw std::invalid_argument("top_intentions: nti must be in [1, m]");
  }
  std::vector<double> sorted(belief.probabilities.data(), belief.probabilities.data() + m);
  std::nth_element(sorted.begin(), sorted.begin() + (nti - 1), sorted.end(), std::greater<>());
  const double cutoff = sorted[static_cast<std::size_t>(nti - 1)];
  std::vector<int> out;
  for (int j = 0; j < m; ++j) {
    if (belief.probabilities(j) >= cutoff) {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<std::size_t> select_top_samples(const std::vector<int>& sample_intentions,
                                            const Belief& belief, int nti) {
  const auto top = top_intentions(belief, nti);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sample_intentions.size(); ++i) {
    if (std::binary_search(top.begin(), top.end(), sample_intentions[i])) {
      out.push_back(i);
    }
  }
  return out;
}

MutableIntentionFilter::MutableIntentionFilter(IntentionMap map, FilterConfig config,
                                               const MotionModel& model, std::uint64_t seed)
    : map_(std::move(map)), config_(config), model_(&model), rng_(seed) {
  config_.validate();
  particles_ = init_particles(map_.size(), config_.num_particles, rng_);
}

void MutableIntentionFilter::observe(const Position& p) {
  if (observation_) {
    observation_->push_back(p);
  } else {
    Path first(1, 2);
    first.row(0) = p.transpose();
    observation_.emplace(std::move(first));
  }
}

const Trajectory& MutableIntentionFilter::observation() const {
  if (!observation_) {
    throw std::logic_error("MutableIntentionFilter: nothing observed yet");
  }
  return *observation_;
}

void MutableIntentionFilter::set_particles(std::vector<Particle> particles) {
  if (static_cast<int>(particles.size()) != config_.num_particles) {
    throw std::invalid_argument("set_particles: particle count must stay M");
  }
  for (const auto& p : particles) {
    if (p.intention < 0 || p.intention >= map_.size() || !(p.weight >= 0.0 && p.weight <= 1.0)) {
      throw std::invalid_argument("set_particles: invalid particle");
    }
  }
  particles_ = std::move(particles);
}

FilterStep MutableIntentionFilter::step() {
  FilterStep out;
  out.observed = observed();
  const int m = map_.size();
  if (out.observed >= 1) {
    const Trajectory& obs = *observation_;
    const auto truncated =
        truncated_predict(particles_, map_, obs, *model_, config_.lookback, rng_, config_.time_to_go);
    if (truncated) {
      out.warmup = false;
      out.underflow =
          weight_update(particles_, *truncated, obs.tail(config_.lookback), config_.tau);
      out.weighted_belief = aggregate_belief(particles_, m);
      out.ess = effective_sample_size(particles_);
      resample_sir(particles_, rng_);
      out.mutations = mutate_intentions(particles_, config_.p_mutation, m, rng_);
    }
  }
  out.belief = aggregate_belief(particles_, m);
  if (out.warmup) {
    out.weighted_belief = out.belief;
    out.ess = effective_sample_size(particles_);
  }
  if (out.observed >= 2) {
    const Trajectory& obs = *observation_;
    out.samples.reserve(particles_.size());
    out.sample_intentions.reserve(particles_.size());
    for (auto& p : particles_) {
      Trajectory pred =
          predict_with_intention(*model_, obs, map_.region(p.intention), rng_, config_.time_to_go);
      p.last_prediction = pred;
      out.samples.push_back(std::move(pred));
      out.sample_intentions.push_back(p.intention);
    }
  }
  return out;
}

}  // namespace mif
