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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mif {

struct SampleRecord {
  int intention = 0;
  Path points;
};

/// One filtering iteration as written to a run log.
struct IterationRecord {
  int iteration = 0;
  /// 0-based index of the latest observed frame.
  int frame = 0;
  bool warmup = true;
  std::vector<double> belief;
  std::vector<double> weighted_belief;
  double ess = 0.0;
  int mutations = 0;
  bool underflow = false;
  /// Sample endpoints with their intentions (optional).
  std::vector<SampleRecord> endpoints;
  /// Full samples (optional; always present on the final iteration).
  std::vector<SampleRecord> samples;
};

struct RunHeader {
  std::string pedestrian_id;
  std::string motion_model;
  FilterConfig config;
  std::uint64_t seed = 0;
  int num_intentions = 0;
  int observed_frames = 0;
  std::optional<int> goal_region_id;
  std::optional<int> switch_frame;
  Path observation;
};

/// Header plus per-iteration records of one filter run on one trajectory.
struct RunLog {
  RunHeader header;
  std::vector<IterationRecord> iterations;
};

struct RunOptions {
  /// Frames fed to the filter; 0 selects length - lookback.
  int observed_frames = 0;
  bool log_endpoints = false;
  bool log_all_samples = false;
};

/// Feeds the first `observed_frames` positions of `record` to a fresh filter,
/// iterating every `iterate_every` frames with the last iteration on the
/// final observed frame.
RunLog run_filter(const TrajectoryRecord& record, const IntentionMap& map,
                  const MotionModel& model, const std::string& model_name,
                  const FilterConfig& config, std::uint64_t seed, const RunOptions& options = {});

/// JSON-lines: a header line then one line per iteration.
std::string run_log_to_jsonl(const RunLog& log);
RunLog run_log_from_jsonl(std::istream& in);

/// Seed for trajectory `index` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace mif
