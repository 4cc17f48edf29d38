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

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mif {

/// Global planar position in meters.
using Position = Eigen::Vector2d;

/// Row-per-frame position sequence, templated on scalar so the learning code
/// can run in extended precision.
template <typename Scalar>
using PathT = Eigen::Matrix<Scalar, Eigen::Dynamic, 2, Eigen::RowMajor>;
using Path = PathT<double>;

/// Time-ordered 2D positions sampled at a fixed frame interval.
///
/// Always holds at least one finite position. The frame interval is carried
/// for ingestion and plotting only; every computation in the library is per
/// frame.
class Trajectory {
 public:
  Trajectory() : positions_(Path::Zero(1, 2)) {}
  explicit Trajectory(Path positions, double frame_interval = 0.1);

  static Trajectory from_points(const std::vector<Position>& points,
                                double frame_interval = 0.1);

  std::size_t size() const { return static_cast<std::size_t>(positions_.rows()); }
  Eigen::Index rows() const { return positions_.rows(); }
  const Path& positions() const { return positions_; }
  double frame_interval() const { return frame_interval_; }

  Position operator[](Eigen::Index i) const { return positions_.row(i).transpose(); }
  Position front() const { return (*this)[0]; }
  Position back() const { return (*this)[rows() - 1]; }

  /// First `count` frames.
  Trajectory head(Eigen::Index count) const;
  /// Last `count` frames.
  Trajectory tail(Eigen::Index count) const;
  Trajectory segment(Eigen::Index start, Eigen::Index count) const;

  void push_back(const Position& p);

  /// Same positions, frame order reversed.
  Trajectory reversed() const;

  bool operator==(const Trajectory& other) const {
    return frame_interval_ == other.frame_interval_ &&
           positions_.rows() == other.positions_.rows() &&
           positions_ == other.positions_;
  }

 private:
  Path positions_;
  double frame_interval_ = 0.1;
};

/// Axis-aligned square goal region.
struct GoalRegion {
  int id = 0;
  Position center = Position::Zero();
  double half_width = 0.75;
};

/// Axis-aligned rectangle, used for map extents.
struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

/// The finite intention set G_1..G_m and its adjacency structure.
///
/// Region ids are 0..m-1 in order; adjacency is symmetric.
class IntentionMap {
 public:
  IntentionMap() = default;
  IntentionMap(std::vector<GoalRegion> regions, std::vector<std::vector<int>> adjacency,
               std::optional<Bounds> bounds = std::nullopt);

  int size() const { return static_cast<int>(regions_.size()); }
  const GoalRegion& region(int id) const { return regions_.at(static_cast<std::size_t>(id)); }
  const std::vector<GoalRegion>& regions() const { return regions_; }
  const std::vector<int>& adjacent(int id) const { return adjacency_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }
  bool are_adjacent(int a, int b) const;

  /// Declared extents, or the bounding box of all regions when none was given.
  Bounds bounds() const;
  bool has_declared_bounds() const { return bounds_.has_value(); }

  /// First region containing `p`, if any.
  std::optional<int> locate(const Position& p) const;

  bool operator==(const IntentionMap& other) const;

 private:
  std::vector<GoalRegion> regions_;
  std::vector<std::vector<int>> adjacency_;
  std::optional<Bounds> bounds_;
};

/// Euclidean norm of the flattened difference of two equal-length paths.
template <typename DerivedA, typename DerivedB>
auto segment_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() < 1) {
    throw std::invalid_argument("segment_distance: paths must have equal non-zero length");
  }
  return (a - b).norm();
}

double segment_distance(const Trajectory& a, const Trajectory& b);

/// Mean Euclidean displacement between consecutive frames.
template <typename Derived>
auto average_step_length(const Eigen::MatrixBase<Derived>& path) {
  if (path.rows() < 2) {
    throw std::invalid_argument("average_step_length: need at least two frames");
  }
  const auto steps = path.bottomRows(path.rows() - 1) - path.topRows(path.rows() - 1);
  return steps.rowwise().norm().mean();
}

double average_step_length(const Trajectory& traj);

/// Boundary-inclusive point-in-square test.
inline bool region_contains(const GoalRegion& region, const Position& p) {
  return std::abs(p.x() - region.center.x()) <= region.half_width &&
         std::abs(p.y() - region.center.y()) <= region.half_width;
}

/// Clamp `p` into the closed square of `region`.
Position clamp_into(const GoalRegion& region, const Position& p);

}  // namespace mif
