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

#include "mif/motion.hpp"
#include "mif/trajectory.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace mif {

/// One intention hypothesis with its importance weight.
struct Particle {
  double weight = 0.0;
  int intention = 0;
  /// Most recent long-horizon prediction, kept for diagnostics only.
  std::optional<Trajectory> last_prediction;
};

struct FilterConfig {
  int num_particles = 340;
  /// Temperature of the exponential weight update.
  double tau = 1.0;
  double p_mutation = 0.01;
  /// Truncated-comparison window T_f in frames.
  int lookback = 20;
  int iterate_every = 2;
  /// Number of top-belief intentions whose samples are trusted.
  int nti = 1;
  TimeToGoOptions time_to_go;

  void validate() const;
};

nlohmann::json filter_config_to_json(const FilterConfig& cfg);
FilterConfig filter_config_from_json(const nlohmann::json& j);

/// Probability vector over the m intentions.
struct Belief {
  Eigen::VectorXd probabilities;

  int size() const { return static_cast<int>(probabilities.size()); }
  int argmax() const;
};

/// Uniform weights 1/M, intentions i.i.d. uniform over 0..m-1.
std::vector<Particle> init_particles(int num_intentions, int num_particles, Rng& rng);

/// Predicts from x_1:t-T_f under each particle's intention and keeps the
/// first T_f frames, holding the last position when the horizon is
/// shorter. Returns nullopt while the observation has at most T_f + 1
/// frames (warm-up).
std::optional<std::vector<Trajectory>> truncated_predict(const std::vector<Particle>& particles,
                                                         const IntentionMap& map,
                                                         const Trajectory& observation,
                                                         const MotionModel& model, int lookback,
                                                         Rng& rng, const TimeToGoOptions& options = {});

/// w_i <- w_i exp(-tau d_i) / sum_j w_j exp(-tau d_j), d_i the segment
/// distance to `ground_truth`. Evaluated in the log domain. Returns true
/// when the update degenerated (no finite positive mass) and weights were
/// reset to uniform.
bool weight_update(std::vector<Particle>& particles, const std::vector<Trajectory>& truncated,
                   const Trajectory& ground_truth, double tau);

/// Same update from precomputed distances.
bool weight_update_from_distances(std::vector<Particle>& particles,
                                  const std::vector<double>& distances, double tau);

/// Systematic resampling: M offspring, inherited intentions, weights 1/M.
void resample_sir(std::vector<Particle>& particles, Rng& rng);

/// Offspring count per parent from a single systematic draw `u0` in [0, 1/M).
std::vector<int> systematic_offspring(const Eigen::VectorXd& weights, double u0);

/// With probability p each particle takes a different intention drawn
/// uniformly from the other m-1. Returns the number of mutated particles;
/// a no-op when m < 2.
int mutate_intentions(std::vector<Particle>& particles, double p_mutation, int num_intentions,
                      Rng& rng);

/// Sum of particle weights per intention.
Belief aggregate_belief(const std::vector<Particle>& particles, int num_intentions);

/// 1 / sum w_i^2.
double effective_sample_size(const std::vector<Particle>& particles);

/// Intentions whose belief is at least the nti-th largest value (ties at the
/// cutoff are all included), in ascending id order.
std::vector<int> top_intentions(const Belief& belief, int nti);

/// Indices of samples whose intention is among top_intentions(belief, nti).
std::vector<std::size_t> select_top_samples(const std::vector<int>& sample_intentions,
                                            const Belief& belief, int nti);

/// Outcome of one filtering iteration.
struct FilterStep {
  /// Number of observed frames at this iteration.
  int observed = 0;
  bool warmup = true;
  Belief belief;
  /// Belief from the updated weights before resampling.
  Belief weighted_belief;
  double ess = 0.0;
  int mutations = 0;
  bool underflow = false;
  /// Long-horizon predictions from the full observation, one per particle.
  std::vector<Trajectory> samples;
  std::vector<int> sample_intentions;
};

/// Particle filter over goal-region hypotheses with intention mutation.
class MutableIntentionFilter {
 public:
  MutableIntentionFilter(IntentionMap map, FilterConfig config, const MotionModel& model,
                         std::uint64_t seed);

  /// Appends one observed position.
  void observe(const Position& p);

  /// Runs truncated prediction, weight update, resampling, mutation,
  /// aggregation and long-horizon prediction on the current observation.
  /// During warm-up only the last two happen.
  FilterStep step();

  const std::vector<Particle>& particles() const { return particles_; }
  void set_particles(std::vector<Particle> particles);
  const IntentionMap& map() const { return map_; }
  const FilterConfig& config() const { return config_; }
  int observed() const { return observation_ ? static_cast<int>(observation_->rows()) : 0; }
  const Trajectory& observation() const;

 private:
  IntentionMap map_;
  FilterConfig config_;
  const MotionModel* model_;
  Rng rng_;
  std::vector<Particle> particles_;
  std::optional<Trajectory> observation_;
};

}  // namespace mif
