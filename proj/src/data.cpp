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

#include "mif/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace mif {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, bool any_space) {
  std::vector<std::string> out;
  if (!any_space) {
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
      out.emplace_back();
    }
    return out;
  }
  std::string token;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!token.empty()) {
        out.push_back(std::move(token));
        token.clear();
      }
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) {
    out.push_back(std::move(token));
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + s + "'");
  }
  return value;
}

long long parse_int(const std::string& s, std::size_t line, const char* what) {
  long long value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("invalid ") + what + " '" + s + "'");
  }
  return value;
}

struct RawRow {
  long long frame;
  Position p;
  std::size_t line;
};

struct RawTrack {
  std::string id;
  std::vector<RawRow> rows;
};

std::vector<TrajectoryRecord> finish(std::vector<RawTrack>& tracks, const LoadOptions& options) {
  std::vector<TrajectoryRecord> records;
  for (auto& track : tracks) {
    if (track.rows.size() < 2) {
      continue;
    }
    std::vector<Position> points;
    points.reserve(track.rows.size());
    for (const auto& row : track.rows) {
      points.push_back(row.p * options.scale);
    }
    TrajectoryRecord rec;
    rec.pedestrian_id = track.id;
    rec.trajectory = Trajectory::from_points(points, options.frame_interval);
    if (options.map != nullptr) {
      rec.goal_region_id = options.map->locate(rec.trajectory.back());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TrajectoryRecord> load_normalized(std::istream& in, const LoadOptions& options) {
  std::vector<RawTrack> tracks;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    if (!header_seen) {
      if (content != "ped_id,frame,x,y") {
        throw ParseError(line_no, "expected header 'ped_id,frame,x,y'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split(content, false);
    if (cells.size() != 4) {
      throw ParseError(line_no, "expected 4 columns, got " + std::to_string(cells.size()));
    }
    if (cells[0].empty()) {
      throw ParseError(line_no, "empty ped_id");
    }
    RawRow row{parse_int(cells[1], line_no, "frame"),
               Position(parse_double(cells[2], line_no, "x"), parse_double(cells[3], line_no, "y")),
               line_no};
    auto [it, inserted] = index.try_emplace(cells[0], tracks.size());
    if (inserted) {
      tracks.push_back(RawTrack{cells[0], {}});
    }
    auto& track = tracks[it->second];
    if (!track.rows.empty() && row.frame != track.rows.back().frame + 1) {
      throw ParseError(line_no, "non-contiguous frame " + std::to_string(row.frame) +
                                    " for pedestrian " + cells[0]);
    }
    track.rows.push_back(row);
  }
  return finish(tracks, options);
}

std::vector<TrajectoryRecord> load_edinburgh(std::istream& in, const LoadOptions& options) {
  std::vector<RawTrack> tracks;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') {
      continue;
    }
    const auto cells = split(content, true);
    if (cells.size() < 4) {
      throw ParseError(line_no, "expected 'id frame x y'");
    }
    RawRow row{parse_int(cells[1], line_no, "frame"),
               Position(parse_double(cells[2], line_no, "x"), parse_double(cells[3], line_no, "y")),
               line_no};
    auto [it, inserted] = index.try_emplace(cells[0], tracks.size());
    if (inserted) {
      tracks.push_back(RawTrack{cells[0], {}});
    }
    tracks[it->second].rows.push_back(row);
  }
  for (auto& track : tracks) {
    std::stable_sort(track.rows.begin(), track.rows.end(),
                     [](const RawRow& a, const RawRow& b) { return a.frame < b.frame; });
    for (std::size_t i = 1; i < track.rows.size(); ++i) {
      if (track.rows[i].frame == track.rows[i - 1].frame) {
        throw ParseError(track.rows[i].line, "duplicate frame for pedestrian " + track.id);
      }
    }
  }
  return finish(tracks, options);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::vector<TrajectoryRecord> load_trajectories(std::istream& in, TrajectoryFormat format,
                                                const LoadOptions& options) {
  if (!(options.scale > 0.0) || !std::isfinite(options.scale)) {
    throw std::invalid_argument("load_trajectories: scale must be positive");
  }
  return format == TrajectoryFormat::kNormalizedCsv ? load_normalized(in, options)
                                                    : load_edinburgh(in, options);
}

void save_normalized_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << "ped_id,frame,x,y\n";
  for (const auto& rec : records) {
    if (rec.pedestrian_id.find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("pedestrian id may not contain ',' or newline");
    }
    const auto& path = rec.trajectory.positions();
    for (Eigen::Index i = 0; i < path.rows(); ++i) {
      out << rec.pedestrian_id << ',' << i << ',' << format_double(path(i, 0)) << ','
          << format_double(path(i, 1)) << '\n';
    }
  }
}

void save_labels_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << "ped_id,goal_region_id,switch_frame\n";
  for (const auto& rec : records) {
    out << rec.pedestrian_id << ',';
    if (rec.goal_region_id) {
      out << *rec.goal_region_id;
    }
    out << ',';
    if (rec.switch_frame) {
      out << *rec.switch_frame;
    }
    out << '\n';
  }
}

void apply_labels_csv(std::istream& in, std::vector<TrajectoryRecord>& records) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    index.emplace(records[i].pedestrian_id, i);
  }
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    if (!header_seen) {
      if (content != "ped_id,goal_region_id,switch_frame") {
        throw ParseError(line_no, "expected header 'ped_id,goal_region_id,switch_frame'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split(content, false);
    if (cells.size() != 3) {
      throw ParseError(line_no, "expected 3 columns");
    }
    const auto it = index.find(cells[0]);
    if (it == index.end()) {
      throw ParseError(line_no, "unknown pedestrian " + cells[0]);
    }
    auto& rec = records[it->second];
    rec.goal_region_id.reset();
    rec.switch_frame.reset();
    if (!cells[1].empty()) {
      rec.goal_region_id = static_cast<int>(parse_int(cells[1], line_no, "goal_region_id"));
    }
    if (!cells[2].empty()) {
      rec.switch_frame = static_cast<int>(parse_int(cells[2], line_no, "switch_frame"));
    }
  }
}

nlohmann::json map_to_json(const IntentionMap& map) {
  nlohmann::json regions = nlohmann::json::array();
  nlohmann::json adjacency = nlohmann::json::object();
  for (const auto& r : map.regions()) {
    regions.push_back({{"id", r.id}, {"cx", r.center.x()}, {"cy", r.center.y()},
                       {"half_width", r.half_width}});
    adjacency[std::to_string(r.id)] = map.adjacent(r.id);
  }
  nlohmann::json j = {{"regions", regions}, {"adjacency", adjacency}};
  if (map.has_declared_bounds()) {
    const auto b = map.bounds();
    j["bounds"] = {b.x_min, b.y_min, b.x_max, b.y_max};
  }
  return j;
}

IntentionMap map_from_json(const nlohmann::json& j) {
  std::vector<GoalRegion> regions;
  for (const auto& r : j.at("regions")) {
    regions.push_back(GoalRegion{r.at("id").get<int>(),
                                 Position(r.at("cx").get<double>(), r.at("cy").get<double>()),
                                 r.value("half_width", 0.75)});
  }
  std::sort(regions.begin(), regions.end(),
            [](const GoalRegion& a, const GoalRegion& b) { return a.id < b.id; });
  std::vector<std::vector<int>> adjacency(regions.size());
  if (j.contains("adjacency")) {
    for (const auto& [key, value] : j.at("adjacency").items()) {
      const int id = std::stoi(key);
      if (id < 0 || id >= static_cast<int>(regions.size())) {
        throw std::invalid_argument("goal map: adjacency key out of range: " + key);
      }
      adjacency[static_cast<std::size_t>(id)] = value.get<std::vector<int>>();
    }
  }
  std::optional<Bounds> bounds;
  if (j.contains("bounds")) {
    const auto b = j.at("bounds").get<std::vector<double>>();
    if (b.size() != 4) {
      throw std::invalid_argument("goal map: bounds must be [x_min, y_min, x_max, y_max]");
    }
    bounds = Bounds{b[0], b[1], b[2], b[3]};
  }
  return IntentionMap(std::move(regions), std::move(adjacency), bounds);
}

namespace {

// Point at arc length `s` along the counter-clockwise perimeter of `b`,
// starting at the lower-left corner.
Position perimeter_point(const Bounds& b, double s) {
  const double w = b.width();
  const double h = b.height();
  s = std::fmod(s, 2.0 * (w + h));
  if (s < 0.0) {
    s += 2.0 * (w + h);
  }
  if (s <= w) {
    return {b.x_min + s, b.y_min};
  }
  s -= w;
  if (s <= h) {
    return {b.x_max, b.y_min + s};
  }
  s -= h;
  if (s <= w) {
    return {b.x_max - s, b.y_max};
  }
  s -= w;
  return {b.x_min, b.y_max - s};
}

}  // namespace

IntentionMap build_boundary_map(const Bounds& bounds, int num_regions, double side) {
  if (num_regions < 2) {
    throw std::invalid_argument("build_boundary_map: need at least two regions");
  }
  if (!(side > 0.0)) {
    throw std::invalid_argument("build_boundary_map: side must be positive");
  }
  const double half = 0.5 * side;
  const Bounds inset{bounds.x_min + half, bounds.y_min + half, bounds.x_max - half,
                     bounds.y_max - half};
  if (!(inset.width() > 0.0) || !(inset.height() > 0.0)) {
    throw std::invalid_argument("build_boundary_map: bounds smaller than one region");
  }
  const double perimeter = 2.0 * (inset.width() + inset.height());
  const double spacing = perimeter / num_regions;

  constexpr double kTol = 1e-9;
  auto place = [&](double offset) {
    std::vector<GoalRegion> regions;
    regions.reserve(static_cast<std::size_t>(num_regions));
    for (int k = 0; k < num_regions; ++k) {
      regions.push_back(GoalRegion{k, perimeter_point(inset, offset + k * spacing), half});
    }
    for (std::size_t a = 0; a < regions.size(); ++a) {
      for (std::size_t b = a + 1; b < regions.size(); ++b) {
        const double cheb = (regions[a].center - regions[b].center).cwiseAbs().maxCoeff();
        if (cheb < side - kTol) {
          return std::optional<std::vector<GoalRegion>>();
        }
      }
    }
    return std::optional<std::vector<GoalRegion>>(std::move(regions));
  };
  // Regions straddling a corner can collide, so shift the whole ring along
  // the perimeter until it fits.
  constexpr int kOffsetCandidates = 64;
  std::optional<std::vector<GoalRegion>> regions;
  for (int j = 0; j < kOffsetCandidates && !regions; ++j) {
    regions = place(spacing * j / kOffsetCandidates);
  }
  if (!regions) {
    throw std::invalid_argument("build_boundary_map: " + std::to_string(num_regions) +
                                " regions of side " + format_double(side) +
                                " do not fit on the boundary without overlap");
  }
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(num_regions));
  for (int k = 0; k < num_regions; ++k) {
    const int prev = (k + num_regions - 1) % num_regions;
    const int next = (k + 1) % num_regions;
    auto& adj = adjacency[static_cast<std::size_t>(k)];
    adj.push_back(prev);
    if (next != prev) {
      adj.push_back(next);
    }
  }
  return IntentionMap(std::move(*regions), std::move(adjacency), bounds);
}

void SynthConfig::validate() const {
  if (map.size() < 2) {
    throw std::invalid_argument("synth config: map needs at least two regions");
  }
  if (num_trajectories < 0) {
    throw std::invalid_argument("synth config: num_trajectories must be >= 0");
  }
  if (!(speed_range.first > 0.0) || !(speed_range.second >= speed_range.first)) {
    throw std::invalid_argument("synth config: speed_range must satisfy 0 < lo <= hi");
  }
  if (!(heading_noise_std >= 0.0) || !(position_noise_std >= 0.0) ||
      !(min_travel_distance >= 0.0) || !std::isfinite(curvature_amplitude)) {
    throw std::invalid_argument("synth config: noise parameters must be >= 0");
  }
  if (!(intention_switch_probability >= 0.0 && intention_switch_probability <= 1.0)) {
    throw std::invalid_argument("synth config: intention_switch_probability must be in [0, 1]");
  }
  if (!(frame_interval > 0.0)) {
    throw std::invalid_argument("synth config: frame_interval must be positive");
  }
}

nlohmann::json synth_config_to_json(const SynthConfig& cfg) {
  return {{"map", map_to_json(cfg.map)},
          {"num_trajectories", cfg.num_trajectories},
          {"speed_range", {cfg.speed_range.first, cfg.speed_range.second}},
          {"heading_noise_std", cfg.heading_noise_std},
          {"position_noise_std", cfg.position_noise_std},
          {"curvature_amplitude", cfg.curvature_amplitude},
          {"intention_switch_probability", cfg.intention_switch_probability},
          {"min_travel_distance", cfg.min_travel_distance},
          {"frame_interval", cfg.frame_interval},
          {"rng_seed", cfg.rng_seed}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j,
                                   const std::optional<IntentionMap>& map_override) {
  SynthConfig cfg;
  if (map_override) {
    cfg.map = *map_override;
  } else if (j.contains("map")) {
    cfg.map = map_from_json(j.at("map"));
  } else if (j.contains("boundary_map")) {
    const auto& bm = j.at("boundary_map");
    const auto b = bm.at("bounds").get<std::vector<double>>();
    if (b.size() != 4) {
      throw std::invalid_argument("synth config: bounds must be [x_min, y_min, x_max, y_max]");
    }
    cfg.map = build_boundary_map(Bounds{b[0], b[1], b[2], b[3]}, bm.at("num_regions").get<int>(),
                                 bm.value("side", 1.5));
  } else {
    throw std::invalid_argument("synth config: needs 'map', 'boundary_map' or a map file");
  }
  cfg.num_trajectories = j.value("num_trajectories", cfg.num_trajectories);
  if (j.contains("speed_range")) {
    const auto s = j.at("speed_range").get<std::vector<double>>();
    if (s.size() != 2) {
      throw std::invalid_argument("synth config: speed_range must be [lo, hi]");
    }
    cfg.speed_range = {s[0], s[1]};
  }
  cfg.heading_noise_std = j.value("heading_noise_std", cfg.heading_noise_std);
  cfg.position_noise_std = j.value("position_noise_std", cfg.position_noise_std);
  cfg.curvature_amplitude = j.value("curvature_amplitude", cfg.curvature_amplitude);
  cfg.intention_switch_probability =
      j.value("intention_switch_probability", cfg.intention_switch_probability);
  cfg.min_travel_distance = j.value("min_travel_distance", cfg.min_travel_distance);
  cfg.frame_interval = j.value("frame_interval", cfg.frame_interval);
  cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
  cfg.validate();
  return cfg;
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

Position uniform_in(const GoalRegion& region, Rng& rng) {
  const double h = region.half_width;
  const Position p(region.center.x() + uniform(rng, -h, h), region.center.y() + uniform(rng, -h, h));
  return clamp_into(region, p);
}

// Frames 0..N from `from` to `goal` (both included): straight-line progress,
// a signed sine bulge and a bridged random walk laterally.
std::vector<Position> make_leg(const Position& from, const Position& goal, double speed,
                               const SynthConfig& cfg, Rng& rng) {
  const Position delta = goal - from;
  const double dist = delta.norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(dist / speed)));
  const Position dir = dist > 0.0 ? Position(delta / dist) : Position(1.0, 0.0);
  const Position normal(-dir.y(), dir.x());
  const double step_len = dist / steps;

  std::vector<double> walk(static_cast<std::size_t>(steps) + 1, 0.0);
  if (cfg.heading_noise_std > 0.0) {
    std::normal_distribution<double> heading(0.0, cfg.heading_noise_std);
    for (int k = 1; k <= steps; ++k) {
      walk[static_cast<std::size_t>(k)] =
          walk[static_cast<std::size_t>(k - 1)] + step_len * std::sin(heading(rng));
    }
  }
  std::vector<Position> leg;
  leg.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    const double s = static_cast<double>(k) / steps;
    const double bridge = walk[static_cast<std::size_t>(k)] - s * walk.back();
    const double bulge = cfg.curvature_amplitude * dist * std::sin(std::numbers::pi * s);
    leg.push_back(from + s * delta + (bulge + bridge) * normal);
  }
  leg.back() = goal;
  return leg;
}

std::vector<int> far_regions(const IntentionMap& map, const Position& from, double min_dist,
                             int exclude) {
  std::vector<int> out;
  for (const auto& r : map.regions()) {
    if (r.id == exclude || (exclude >= 0 && map.are_adjacent(exclude, r.id))) {
      continue;
    }
    if (!region_contains(r, from) && (r.center - from).norm() >= min_dist) {
      out.push_back(r.id);
    }
  }
  return out;
}

std::optional<TrajectoryRecord> try_generate(const SynthConfig& cfg, double min_dist, Rng& rng) {
  const Bounds b = cfg.map.bounds();
  const double perimeter = 2.0 * (b.width() + b.height());
  const Position start = perimeter_point(b, uniform(rng, 0.0, perimeter));
  const auto first_choices = far_regions(cfg.map, start, min_dist, -1);
  if (first_choices.empty()) {
    return std::nullopt;
  }
  const int first =
      first_choices[std::uniform_int_distribution<std::size_t>(0, first_choices.size() - 1)(rng)];
  const Position goal = uniform_in(cfg.map.region(first), rng);
  const double speed = uniform(rng, cfg.speed_range.first, cfg.speed_range.second);
  std::vector<Position> points = make_leg(start, goal, speed, cfg, rng);

  TrajectoryRecord rec;
  rec.goal_region_id = first;
  const bool do_switch = cfg.intention_switch_probability > 0.0 &&
                         uniform(rng, 0.0, 1.0) < cfg.intention_switch_probability;
  if (do_switch) {
    const int n = static_cast<int>(points.size()) - 1;
    if (n < 3) {
      return std::nullopt;
    }
    const int lo = std::max(1, n / 3);
    const int hi = std::max(lo, std::min(n - 1, 2 * n / 3));
    const int turn = std::uniform_int_distribution<int>(lo, hi)(rng);
    const Position from = points[static_cast<std::size_t>(turn)];
    const auto second_choices = far_regions(cfg.map, from, min_dist, first);
    if (second_choices.empty()) {
      return std::nullopt;
    }
    const int second = second_choices[std::uniform_int_distribution<std::size_t>(
        0, second_choices.size() - 1)(rng)];
    const Position goal2 = uniform_in(cfg.map.region(second), rng);
    const auto leg2 = make_leg(from, goal2, speed, cfg, rng);
    points.resize(static_cast<std::size_t>(turn) + 1);
    points.insert(points.end(), leg2.begin() + 1, leg2.end());
    rec.goal_region_id = second;
    rec.switch_frame = turn;
  }
  if (cfg.position_noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.position_noise_std);
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
      points[i].x() += noise(rng);
      points[i].y() += noise(rng);
    }
  }
  points.back() = clamp_into(cfg.map.region(*rec.goal_region_id), points.back());
  rec.trajectory = Trajectory::from_points(points, cfg.frame_interval);
  return rec;
}

}  // namespace

std::vector<TrajectoryRecord> generate_synthetic(const SynthConfig& config) {
  config.validate();
  const Bounds b = config.map.bounds();
  const double min_dist = config.min_travel_distance > 0.0
                              ? config.min_travel_distance
                              : 0.3 * std::min(b.width(), b.height());
  const int width = std::max(4, static_cast<int>(std::to_string(config.num_trajectories).size()));

  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<std::size_t>(config.num_trajectories));
  for (int index = 0; index < config.num_trajectories; ++index) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.rng_seed),
                      static_cast<std::uint32_t>(config.rng_seed >> 32),
                      static_cast<std::uint32_t>(index)};
    Rng rng(seq);
    std::optional<TrajectoryRecord> rec;
    for (int attempt = 0; attempt < 1000 && !rec; ++attempt) {
      rec = try_generate(config, min_dist, rng);
    }
    if (!rec) {
      throw std::invalid_argument("generate_synthetic: map admits no trajectory with the "
                                  "requested travel distance");
    }
    std::string id = std::to_string(index);
    id.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0');
    rec->pedestrian_id = "syn" + id;
    records.push_back(std::move(*rec));
  }
  return records;
}

std::pair<std::vector<TrajectoryRecord>, std::vector<TrajectoryRecord>> split_corpus(
    const std::vector<TrajectoryRecord>& records, double train_fraction, std::uint64_t rng_seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_corpus: train_fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  Rng rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(records.size())));
  std::vector<bool> is_train(records.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) {
    is_train[order[i]] = true;
  }
  std::pair<std::vector<TrajectoryRecord>, std::vector<TrajectoryRecord>> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (is_train[i] ? out.first : out.second).push_back(records[i]);
  }
  return out;
}

}  // namespace mif
