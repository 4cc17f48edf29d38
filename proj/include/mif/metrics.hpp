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
#include "mif/filter.hpp"
#include "mif/run_log.hpp"
#include "mif/trajectory.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mif {

namespace detail {
inline void check_aligned(Eigen::Index a, Eigen::Index b) {
  if (a != b || a < 1) {
    throw std::invalid_argument("offset error: trajectories must have equal non-zero length");
  }
}
}  // namespace detail

/// Mean per-frame Euclidean distance.
template <typename DerivedA, typename DerivedB>
double aoe(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& truth) {
  detail::check_aligned(pred.rows(), truth.rows());
  return (pred - truth).rowwise().norm().mean();
}

/// Euclidean distance at the final frame.
template <typename DerivedA, typename DerivedB>
double foe(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& truth) {
  detail::check_aligned(pred.rows(), truth.rows());
  return (pred.row(pred.rows() - 1) - truth.row(truth.rows() - 1)).norm();
}

/// Largest per-frame Euclidean distance.
template <typename DerivedA, typename DerivedB>
double moe(const Eigen::MatrixBase<DerivedA>& pred, const Eigen::MatrixBase<DerivedB>& truth) {
  detail::check_aligned(pred.rows(), truth.rows());
  return (pred - truth).rowwise().norm().maxCoeff();
}

inline double aoe(const Trajectory& p, const Trajectory& t) { return aoe(p.positions(), t.positions()); }
inline double foe(const Trajectory& p, const Trajectory& t) { return foe(p.positions(), t.positions()); }
inline double moe(const Trajectory& p, const Trajectory& t) { return moe(p.positions(), t.positions()); }

/// Per-axis kernel bandwidth: Scott's rule sigma * n^(-1/6) floored, or a
/// fixed value.
struct BandwidthRule {
  enum class Kind { kScott, kFixed };
  Kind kind = Kind::kScott;
  double fixed = 1.0;
  double floor = 1e-3;

  static BandwidthRule scott(double floor = 1e-3) { return {Kind::kScott, 1.0, floor}; }
  static BandwidthRule constant(double h) { return {Kind::kFixed, h, 0.0}; }
};

/// Mean over frames of -log p(truth) under a diagonal Gaussian KDE fitted to
/// the sample positions at that frame. Samples are aligned to the truth
/// length by holding their last position or truncating.
double nll(const std::vector<Trajectory>& samples, const Trajectory& truth,
           const BandwidthRule& rule = BandwidthRule::scott());

/// True when the top-nti intentions (ties included) meet the ground-truth
/// intention or one of its neighbors.
bool iea(const Belief& final_belief, int nti, int gt_intention, const IntentionMap& map);

struct TrajectoryEval {
  std::string pedestrian_id;
  int gt_intention = 0;
  bool intention_correct = false;
  int num_samples = 0;
  double mean_aoe = 0.0;
  double min_aoe = 0.0;
  double mean_foe = 0.0;
  double min_foe = 0.0;
  double moe = 0.0;
  double nll = 0.0;
};

struct EvalReport {
  double tau = 0.0;
  double p_mutation = 0.0;
  int nti = 1;
  int num_trajectories = 0;
  double mean_aoe = 0.0;
  double min_aoe = 0.0;
  double mean_foe = 0.0;
  double min_foe = 0.0;
  double moe = 0.0;
  double nll = 0.0;
  double iea = 0.0;
  std::vector<TrajectoryEval> per_trajectory;
};

/// Scores the final iteration of one run against the T_f frames that follow
/// the observation.
TrajectoryEval evaluate_trajectory(const RunLog& log, const TrajectoryRecord& record,
                                   const IntentionMap& map, int nti);

/// Averages per-trajectory scores over all logs. Every log must match a
/// labeled record by pedestrian id.
EvalReport evaluate_run(const std::vector<RunLog>& logs,
                        const std::vector<TrajectoryRecord>& records, const IntentionMap& map,
                        int nti);

nlohmann::json report_to_json(const EvalReport& report);
/// Header line of the flat report CSV.
std::string report_csv_header();
std::string report_csv_row(const EvalReport& report);
/// Per-trajectory table: header plus one row per trajectory.
std::string report_breakdown_csv(const EvalReport& report);

}  // namespace mif
