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

#include "mif/metrics.hpp"

#include "mif/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace mif {
namespace {

double bandwidth(const Eigen::VectorXd& values, const BandwidthRule& rule) {
  if (rule.kind == BandwidthRule::Kind::kFixed) {
    return std::max(rule.fixed, rule.floor);
  }
  const auto n = static_cast<double>(values.size());
  double sigma = 0.0;
  if (values.size() > 1) {
    sigma = std::sqrt((values.array() - values.mean()).square().sum() / (n - 1.0));
  }
  return std::max(sigma * std::pow(n, -1.0 / 6.0), rule.floor);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

double nll(const std::vector<Trajectory>& samples, const Trajectory& truth,
           const BandwidthRule& rule) {
  if (samples.empty()) {
    throw std::invalid_argument("nll: need at least one sample");
  }
  const Eigen::Index horizon = truth.rows();
  const auto n = static_cast<Eigen::Index>(samples.size());
  std::vector<Path> aligned;
  aligned.reserve(samples.size());
  for (const auto& s : samples) {
    aligned.push_back(align_horizon(s, horizon).positions());
  }
  double total = 0.0;
  Eigen::VectorXd xs(n);
  Eigen::VectorXd ys(n);
  Eigen::VectorXd log_k(n);
  for (Eigen::Index t = 0; t < horizon; ++t) {
    for (Eigen::Index k = 0; k < n; ++k) {
      xs(k) = aligned[static_cast<std::size_t>(k)](t, 0);
      ys(k) = aligned[static_cast<std::size_t>(k)](t, 1);
    }
    const double hx = bandwidth(xs, rule);
    const double hy = bandwidth(ys, rule);
    const double dx0 = truth.positions()(t, 0);
    const double dy0 = truth.positions()(t, 1);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double dx = (dx0 - xs(k)) / hx;
      const double dy = (dy0 - ys(k)) / hy;
      log_k(k) = -0.5 * (dx * dx + dy * dy);
    }
    const double max_log = log_k.maxCoeff();
    const double lse = max_log + std::log((log_k.array() - max_log).exp().sum());
    const double log_density = lse - std::log(static_cast<double>(n)) -
                               std::log(2.0 * std::numbers::pi * hx * hy);
    total -= log_density;
  }
  return total / static_cast<double>(horizon);
}

bool iea(const Belief& final_belief, int nti, int gt_intention, const IntentionMap& map) {
  if (gt_intention < 0 || gt_intention >= map.size() || final_belief.size() != map.size()) {
    throw std::invalid_argument("iea: intention ids do not match the map");
  }
  for (int j : top_intentions(final_belief, nti)) {
    if (j == gt_intention || map.are_adjacent(gt_intention, j)) {
      return true;
    }
  }
  return false;
}

TrajectoryEval evaluate_trajectory(const RunLog& log, const TrajectoryRecord& record,
                                   const IntentionMap& map, int nti) {
  const auto& h = log.header;
  if (log.iterations.empty()) {
    throw std::invalid_argument("evaluate: run log for " + h.pedestrian_id + " has no iterations");
  }
  if (!record.goal_region_id) {
    throw std::invalid_argument("evaluate: record " + record.pedestrian_id + " has no goal label");
  }
  const int lookback = h.config.lookback;
  if (h.observed_frames + lookback > record.trajectory.rows() ||
      h.num_intentions != map.size()) {
    throw std::invalid_argument("evaluate: run log for " + h.pedestrian_id +
                                " does not match its corpus record or map");
  }
  const auto& last = log.iterations.back();
  if (last.samples.empty()) {
    throw std::invalid_argument("evaluate: final iteration of " + h.pedestrian_id +
                                " carries no samples");
  }
  const Trajectory truth = record.trajectory.segment(h.observed_frames, lookback);
  Belief belief{Eigen::Map<const Eigen::VectorXd>(last.belief.data(),
                                                  static_cast<Eigen::Index>(last.belief.size()))};
  std::vector<int> intentions;
  intentions.reserve(last.samples.size());
  for (const auto& s : last.samples) {
    intentions.push_back(s.intention);
  }
  const auto selected = select_top_samples(intentions, belief, nti);

  TrajectoryEval ev;
  ev.pedestrian_id = h.pedestrian_id;
  ev.gt_intention = *record.goal_region_id;
  ev.intention_correct = iea(belief, nti, ev.gt_intention, map);
  ev.num_samples = static_cast<int>(selected.size());
  if (selected.empty()) {
    // Top intentions hold no particles only if the log is inconsistent.
    throw std::invalid_argument("evaluate: no samples selected for " + h.pedestrian_id);
  }
  std::vector<Trajectory> chosen;
  ev.min_aoe = std::numeric_limits<double>::infinity();
  ev.min_foe = std::numeric_limits<double>::infinity();
  for (std::size_t idx : selected) {
    const Trajectory pred = align_horizon(Trajectory(last.samples[idx].points), lookback);
    const double a = aoe(pred, truth);
    const double f = foe(pred, truth);
    ev.mean_aoe += a;
    ev.mean_foe += f;
    ev.min_aoe = std::min(ev.min_aoe, a);
    ev.min_foe = std::min(ev.min_foe, f);
    ev.moe += moe(pred, truth);
    chosen.push_back(pred);
  }
  const auto count = static_cast<double>(selected.size());
  ev.mean_aoe /= count;
  ev.mean_foe /= count;
  ev.moe /= count;
  ev.nll = nll(chosen, truth);
  return ev;
}

EvalReport evaluate_run(const std::vector<RunLog>& logs,
                        const std::vector<TrajectoryRecord>& records, const IntentionMap& map,
                        int nti) {
  if (logs.empty()) {
    throw std::invalid_argument("evaluate: no run logs");
  }
  std::unordered_map<std::string, const TrajectoryRecord*> by_id;
  for (const auto& r : records) {
    by_id.emplace(r.pedestrian_id, &r);
  }
  EvalReport report;
  report.tau = logs.front().header.config.tau;
  report.p_mutation = logs.front().header.config.p_mutation;
  report.nti = nti;
  int correct = 0;
  for (const auto& log : logs) {
    const auto it = by_id.find(log.header.pedestrian_id);
    if (it == by_id.end()) {
      throw std::invalid_argument("evaluate: no corpus record for " + log.header.pedestrian_id);
    }
    auto ev = evaluate_trajectory(log, *it->second, map, nti);
    report.mean_aoe += ev.mean_aoe;
    report.min_aoe += ev.min_aoe;
    report.mean_foe += ev.mean_foe;
    report.min_foe += ev.min_foe;
    report.moe += ev.moe;
    report.nll += ev.nll;
    correct += ev.intention_correct ? 1 : 0;
    report.per_trajectory.push_back(std::move(ev));
  }
  const auto n = static_cast<double>(logs.size());
  report.num_trajectories = static_cast<int>(logs.size());
  report.mean_aoe /= n;
  report.min_aoe /= n;
  report.mean_foe /= n;
  report.min_foe /= n;
  report.moe /= n;
  report.nll /= n;
  report.iea = correct / n;
  return report;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : r.per_trajectory) {
    rows.push_back({{"ped_id", t.pedestrian_id},
                    {"gt_intention", t.gt_intention},
                    {"intention_correct", t.intention_correct},
                    {"num_samples", t.num_samples},
                    {"mean_aoe", t.mean_aoe},
                    {"min_aoe", t.min_aoe},
                    {"mean_foe", t.mean_foe},
                    {"min_foe", t.min_foe},
                    {"moe", t.moe},
                    {"nll", t.nll}});
  }
  return {{"tau", r.tau},
          {"imm", r.p_mutation > 0.0},
          {"p_mutation", r.p_mutation},
          {"nti", r.nti},
          {"num_trajectories", r.num_trajectories},
          {"iea", r.iea},
          {"nll", r.nll},
          {"min_aoe", r.min_aoe},
          {"min_foe", r.min_foe},
          {"mean_aoe", r.mean_aoe},
          {"mean_foe", r.mean_foe},
          {"moe", r.moe},
          {"per_trajectory", rows}};
}

std::string report_csv_header() {
  return "tau,imm,p_mutation,nti,iea,nll,min_aoe,min_foe,mean_aoe,mean_foe,moe,num_trajectories";
}

std::string report_csv_row(const EvalReport& r) {
  return fmt(r.tau) + "," + (r.p_mutation > 0.0 ? "1" : "0") + "," + fmt(r.p_mutation) + "," +
         std::to_string(r.nti) + "," + fmt(r.iea) + "," + fmt(r.nll) + "," + fmt(r.min_aoe) +
         "," + fmt(r.min_foe) + "," + fmt(r.mean_aoe) + "," + fmt(r.mean_foe) + "," +
         fmt(r.moe) + "," + std::to_string(r.num_trajectories);
}

std::string report_breakdown_csv(const EvalReport& r) {
  std::string out =
      "ped_id,gt_intention,intention_correct,num_samples,mean_aoe,min_aoe,mean_foe,min_foe,moe,nll\n";
  for (const auto& t : r.per_trajectory) {
    out += t.pedestrian_id + "," + std::to_string(t.gt_intention) + "," +
           (t.intention_correct ? "1" : "0") + "," + std::to_string(t.num_samples) + "," +
           fmt(t.mean_aoe) + "," + fmt(t.min_aoe) + "," + fmt(t.mean_foe) + "," +
           fmt(t.min_foe) + "," + fmt(t.moe) + "," + fmt(t.nll) + "\n";
  }
  return out;
}

}  // namespace mif
