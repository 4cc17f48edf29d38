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

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mif {

/// One pedestrian track with its optional ground-truth intention labels.
struct TrajectoryRecord {
  std::string pedestrian_id;
  Trajectory trajectory;
  std::optional<int> goal_region_id;
  /// Frame index at which the pedestrian turned toward a new goal.
  std::optional<int> switch_frame;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Raised on malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class TrajectoryFormat {
  kEdinburgh,      ///< whitespace or comma separated "id frame x y", any row order
  kNormalizedCsv,  ///< "ped_id,frame,x,y" header, contiguous frames per pedestrian
};

struct LoadOptions {
  /// When set, records are labeled with the region containing their endpoint.
  const IntentionMap* map = nullptr;
  /// Uniform scale applied to raw coordinates (e.g. pixels to meters).
  double scale = 1.0;
  double frame_interval = 0.1;
};

/// Parses a trajectory stream. Pedestrians with fewer than two frames are
/// dropped; an empty stream yields an empty list.
std::vector<TrajectoryRecord> load_trajectories(std::istream& in, TrajectoryFormat format,
                                                const LoadOptions& options = {});

/// Writes the normalized CSV form (frames numbered from 0, full precision).
void save_normalized_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);

/// Label sidecar: "ped_id,goal_region_id,switch_frame", empty cells for absent values.
void save_labels_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);
/// Overwrites labels of matching pedestrians; unknown ids are an error.
void apply_labels_csv(std::istream& in, std::vector<TrajectoryRecord>& records);

nlohmann::json map_to_json(const IntentionMap& map);
IntentionMap map_from_json(const nlohmann::json& j);

/// Places `num_regions` squares of side `side` evenly along the perimeter of
/// `bounds` (inset by half a side), counter-clockwise from the lower-left
/// corner. The ring is shifted along the perimeter by the smallest of 64
/// fractions of the spacing that avoids overlap at the corners. Each region
/// is adjacent to its two perimeter neighbors.
IntentionMap build_boundary_map(const Bounds& bounds, int num_regions, double side);

struct SynthConfig {
  IntentionMap map;
  int num_trajectories = 100;
  /// Per-frame travel distance range in meters.
  std::pair<double, double> speed_range{0.1, 0.15};
  double heading_noise_std = 0.0;
  double position_noise_std = 0.0;
  /// Signed lateral bulge as a fraction of leg length; positive bends left.
  double curvature_amplitude = 0.0;
  double intention_switch_probability = 0.0;
  /// Minimum straight-line distance from a leg's start to its goal region
  /// center. Zero selects 30% of the shorter map side.
  double min_travel_distance = 0.0;
  double frame_interval = 0.1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

nlohmann::json synth_config_to_json(const SynthConfig& cfg);
/// Accepts either an inline "map" object in goal-map form, a "boundary_map"
/// object ({"bounds":[x0,y0,x1,y1],"num_regions":n,"side":s}), or an
/// already-loaded map passed by the caller.
SynthConfig synth_config_from_json(const nlohmann::json& j,
                                   const std::optional<IntentionMap>& map_override = std::nullopt);

std::vector<TrajectoryRecord> generate_synthetic(const SynthConfig& config);

/// Deterministic disjoint train/test partition; original order is kept
/// within each part.
std::pair<std::vector<TrajectoryRecord>, std::vector<TrajectoryRecord>> split_corpus(
    const std::vector<TrajectoryRecord>& records, double train_fraction, std::uint64_t rng_seed);

}  // namespace mif
