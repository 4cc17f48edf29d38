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

#include "mif/run_log.hpp"

#include <istream>
#include <random>
#include <stdexcept>

namespace mif {
namespace {

nlohmann::json points_to_json(const Path& p) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    out.push_back({p(i, 0), p(i, 1)});
  }
  return out;
}

Path points_from_json(const nlohmann::json& j) {
  Path p(static_cast<Eigen::Index>(j.size()), 2);
  Eigen::Index i = 0;
  for (const auto& pt : j) {
    p(i, 0) = pt.at(0).get<double>();
    p(i, 1) = pt.at(1).get<double>();
    ++i;
  }
  return p;
}

nlohmann::json samples_to_json(const std::vector<SampleRecord>& samples) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : samples) {
    out.push_back({{"intention", s.intention}, {"points", points_to_json(s.points)}});
  }
  return out;
}

std::vector<SampleRecord> samples_from_json(const nlohmann::json& j) {
  std::vector<SampleRecord> out;
  for (const auto& s : j) {
    out.push_back({s.at("intention").get<int>(), points_from_json(s.at("points"))});
  }
  return out;
}

template <typename T>
nlohmann::json optional_to_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<int> optional_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<int>();
}

std::vector<double> to_vector(const Belief& b) {
  return {b.probabilities.data(), b.probabilities.data() + b.probabilities.size()};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

RunLog run_filter(const TrajectoryRecord& record, const IntentionMap& map,
                  const MotionModel& model, const std::string& model_name,
                  const FilterConfig& config, std::uint64_t seed, const RunOptions& options) {
  config.validate();
  const int length = static_cast<int>(record.trajectory.rows());
  const int observed = options.observed_frames > 0 ? options.observed_frames : length - config.lookback;
  if (observed < 2 || observed > length) {
    throw std::invalid_argument("run_filter: trajectory " + record.pedestrian_id +
                                " too short for the requested observation");
  }
  RunLog log;
  auto& h = log.header;
  h.pedestrian_id = record.pedestrian_id;
  h.motion_model = model_name;
  h.config = config;
  h.seed = seed;
  h.num_intentions = map.size();
  h.observed_frames = observed;
  h.goal_region_id = record.goal_region_id;
  h.switch_frame = record.switch_frame;
  h.observation = record.trajectory.positions().topRows(observed);

  MutableIntentionFilter filter(map, config, model, seed);
  int iteration = 0;
  for (int t = 1; t <= observed; ++t) {
    filter.observe(record.trajectory[t - 1]);
    if (t < 2 || (observed - t) % config.iterate_every != 0) {
      continue;
    }
    const FilterStep step = filter.step();
    IterationRecord rec;
    rec.iteration = iteration++;
    rec.frame = t - 1;
    rec.warmup = step.warmup;
    rec.belief = to_vector(step.belief);
    rec.weighted_belief = to_vector(step.weighted_belief);
    rec.ess = step.ess;
    rec.mutations = step.mutations;
    rec.underflow = step.underflow;
    const bool final_iteration = t == observed;
    for (std::size_t i = 0; i < step.samples.size(); ++i) {
      const int intention = step.sample_intentions[i];
      if (options.log_endpoints) {
        rec.endpoints.push_back({intention, step.samples[i].positions().bottomRows(1)});
      }
      if (final_iteration || options.log_all_samples) {
        rec.samples.push_back({intention, step.samples[i].positions()});
      }
    }
    log.iterations.push_back(std::move(rec));
  }
  return log;
}

std::string run_log_to_jsonl(const RunLog& log) {
  const auto& h = log.header;
  nlohmann::json header = {{"type", "header"},
                           {"ped_id", h.pedestrian_id},
                           {"motion_model", h.motion_model},
                           {"config", filter_config_to_json(h.config)},
                           {"seed", h.seed},
                           {"num_intentions", h.num_intentions},
                           {"observed_frames", h.observed_frames},
                           {"goal_region_id", optional_to_json(h.goal_region_id)},
                           {"switch_frame", optional_to_json(h.switch_frame)},
                           {"observation", points_to_json(h.observation)}};
  std::string out = header.dump() + "\n";
  for (const auto& it : log.iterations) {
    nlohmann::json line = {{"type", "iteration"},
                           {"iteration", it.iteration},
                           {"frame", it.frame},
                           {"warmup", it.warmup},
                           {"belief", it.belief},
                           {"weighted_belief", it.weighted_belief},
                           {"ess", it.ess},
                           {"mutations", it.mutations},
                           {"underflow", it.underflow}};
    if (!it.endpoints.empty()) {
      line["endpoints"] = samples_to_json(it.endpoints);
    }
    if (!it.samples.empty()) {
      line["samples"] = samples_to_json(it.samples);
    }
    out += line.dump() + "\n";
  }
  return out;
}

RunLog run_log_from_jsonl(std::istream& in) {
  RunLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    const auto type = j.value("type", std::string());
    if (!header_seen) {
      if (type != "header") {
        throw ParseError(line_no, "run log must start with a header record");
      }
      auto& h = log.header;
      h.pedestrian_id = j.at("ped_id").get<std::string>();
      h.motion_model = j.at("motion_model").get<std::string>();
      h.config = filter_config_from_json(j.at("config"));
      h.seed = j.at("seed").get<std::uint64_t>();
      h.num_intentions = j.at("num_intentions").get<int>();
      h.observed_frames = j.at("observed_frames").get<int>();
      h.goal_region_id = optional_int(j, "goal_region_id");
      h.switch_frame = optional_int(j, "switch_frame");
      h.observation = points_from_json(j.at("observation"));
      header_seen = true;
      continue;
    }
    if (type != "iteration") {
      throw ParseError(line_no, "unexpected record type '" + type + "'");
    }
    IterationRecord it;
    it.iteration = j.at("iteration").get<int>();
    it.frame = j.at("frame").get<int>();
    it.warmup = j.at("warmup").get<bool>();
    it.belief = j.at("belief").get<std::vector<double>>();
    it.weighted_belief = j.at("weighted_belief").get<std::vector<double>>();
    it.ess = j.at("ess").get<double>();
    it.mutations = j.at("mutations").get<int>();
    it.underflow = j.at("underflow").get<bool>();
    if (j.contains("endpoints")) {
      it.endpoints = samples_from_json(j.at("endpoints"));
    }
    if (j.contains("samples")) {
      it.samples = samples_from_json(j.at("samples"));
    }
    log.iterations.push_back(std::move(it));
  }
  if (!header_seen) {
    throw ParseError(line_no, "empty run log");
  }
  return log;
}

}  // namespace mif
