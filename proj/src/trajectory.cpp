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

#include "mif/trajectory.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mif {

Trajectory::Trajectory(Path positions, double frame_interval)
    : positions_(std::move(positions)), frame_interval_(frame_interval) {
  if (positions_.rows() < 1) {
    throw std::invalid_argument("Trajectory: needs at least one position");
  }
  if (!positions_.allFinite()) {
    throw std::invalid_argument("Trajectory: non-finite position");
  }
  if (!(frame_interval_ > 0.0)) {
    throw std::invalid_argument("Trajectory: frame interval must be positive");
  }
}

Trajectory Trajectory::from_points(const std::vector<Position>& points, double frame_interval) {
  Path path(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    path.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return Trajectory(std::move(path), frame_interval);
}

Trajectory Trajectory::head(Eigen::Index count) const { return segment(0, count); }

Trajectory Trajectory::tail(Eigen::Index count) const { return segment(rows() - count, count); }

Trajectory Trajectory::segment(Eigen::Index start, Eigen::Index count) const {
  if (start < 0 || count < 1 || start + count > rows()) {
    throw std::out_of_range("Trajectory::segment: [" + std::to_string(start) + ", +" +
                            std::to_string(count) + ") outside length " +
                            std::to_string(rows()));
  }
  return Trajectory(positions_.middleRows(start, count), frame_interval_);
}

void Trajectory::push_back(const Position& p) {
  if (!p.allFinite()) {
    throw std::invalid_argument("Trajectory::push_back: non-finite position");
  }
  positions_.conservativeResize(positions_.rows() + 1, Eigen::NoChange);
  positions_.row(positions_.rows() - 1) = p.transpose();
}

Trajectory Trajectory::reversed() const {
  return Trajectory(positions_.colwise().reverse(), frame_interval_);
}

IntentionMap::IntentionMap(std::vector<GoalRegion> regions,
                           std::vector<std::vector<int>> adjacency, std::optional<Bounds> bounds)
    : regions_(std::move(regions)), adjacency_(std::move(adjacency)), bounds_(bounds) {
  const int m = size();
  if (m < 1) {
    throw std::invalid_argument("IntentionMap: needs at least one region");
  }
  if (adjacency_.size() != regions_.size()) {
    throw std::invalid_argument("IntentionMap: adjacency must list every region");
  }
  for (int i = 0; i < m; ++i) {
    const auto& r = regions_[static_cast<std::size_t>(i)];
    if (r.id != i) {
      throw std::invalid_argument("IntentionMap: region ids must be 0..m-1 in order");
    }
    if (!(r.half_width >= 0.0) || !r.center.allFinite()) {
      throw std::invalid_argument("IntentionMap: invalid geometry for region " + std::to_string(i));
    }
    auto& adj = adjacency_[static_cast<std::size_t>(i)];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    for (int j : adj) {
      if (j < 0 || j >= m || j == i) {
        throw std::invalid_argument("IntentionMap: bad adjacency entry " + std::to_string(j) +
                                    " for region " + std::to_string(i));
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j : adjacent(i)) {
      if (!are_adjacent(j, i)) {
        throw std::invalid_argument("IntentionMap: adjacency not symmetric between " +
                                    std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

bool IntentionMap::are_adjacent(int a, int b) const {
  const auto& adj = adjacent(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

Bounds IntentionMap::bounds() const {
  if (bounds_) {
    return *bounds_;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds b{inf, inf, -inf, -inf};
  for (const auto& r : regions_) {
    b.x_min = std::min(b.x_min, r.center.x() - r.half_width);
    b.y_min = std::min(b.y_min, r.center.y() - r.half_width);
    b.x_max = std::max(b.x_max, r.center.x() + r.half_width);
    b.y_max = std::max(b.y_max, r.center.y() + r.half_width);
  }
  return b;
}

std::optional<int> IntentionMap::locate(const Position& p) const {
  for (const auto& r : regions_) {
    if (region_contains(r, p)) {
      return r.id;
    }
  }
  return std::nullopt;
}

bool IntentionMap::operator==(const IntentionMap& other) const {
  if (regions_.size() != other.regions_.size() || adjacency_ != other.adjacency_ ||
      bounds_.has_value() != other.bounds_.has_value()) {
    return false;
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const auto& a = regions_[i];
    const auto& b = other.regions_[i];
    if (a.id != b.id || a.center != b.center || a.half_width != b.half_width) {
      return false;
    }
  }
  if (bounds_) {
    const auto& a = *bounds_;
    const auto& b = *other.bounds_;
    return a.x_min == b.x_min && a.y_min == b.y_min && a.x_max == b.x_max && a.y_max == b.y_max;
  }
  return true;
}

double segment_distance(const Trajectory& a, const Trajectory& b) {
  return segment_distance(a.positions(), b.positions());
}

double average_step_length(const Trajectory& traj) { return average_step_length(traj.positions()); }

Position clamp_into(const GoalRegion& region, const Position& p) {
  const Position lo = region.center.array() - region.half_width;
  const Position hi = region.center.array() + region.half_width;
  return p.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace mif
