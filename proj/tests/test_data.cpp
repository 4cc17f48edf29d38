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
#include "mif/motion.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

namespace mif {
namespace {

std::vector<TrajectoryRecord> parse_csv(const std::string& text, const IntentionMap* map = nullptr) {
  std::istringstream in(text);
  LoadOptions opts;
  opts.map = map;
  return load_trajectories(in, TrajectoryFormat::kNormalizedCsv, opts);
}

SynthConfig small_config(int n, std::uint64_t seed) {
  SynthConfig cfg{build_boundary_map({0, 0, 20, 15}, 8, 1.5)};
  cfg.num_trajectories = n;
  cfg.heading_noise_std = 0.02;
  cfg.position_noise_std = 0.01;
  cfg.curvature_amplitude = 0.1;
  cfg.rng_seed = seed;
  return cfg;
}

TEST(LoadTrajectories, OnePedestrianThreeRows) {
  const auto recs = parse_csv("ped_id,frame,x,y\na,0,0,0\na,1,1,0\na,2,2,0\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].pedestrian_id, "a");
  EXPECT_EQ(recs[0].trajectory.size(), 3u);
  EXPECT_EQ(recs[0].trajectory.back(), Position(2, 0));
}

TEST(LoadTrajectories, NonNumericCoordinateNamesTheLine) {
  try {
    parse_csv("ped_id,frame,x,y\na,0,0,0\na,1,oops,0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadTrajectories, EmptyStreamIsEmptyList) {
  EXPECT_TRUE(parse_csv("").empty());
  std::istringstream in("");
  EXPECT_TRUE(load_trajectories(in, TrajectoryFormat::kEdinburgh).empty());
}

TEST(LoadTrajectories, DropsSingleFramePedestrians) {
  const auto recs = parse_csv("ped_id,frame,x,y\na,0,0,0\nb,0,1,1\nb,1,2,2\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].pedestrian_id, "b");
}

TEST(LoadTrajectories, GapInFramesIsAnError) {
  EXPECT_THROW(parse_csv("ped_id,frame,x,y\na,0,0,0\na,2,1,0\n"), ParseError);
}

TEST(LoadTrajectories, EdinburghSortsFramesAndScales) {
  std::istringstream in("# comment\n7 3 20 0\n7 1 0 0\n7 2 10 0\n");
  LoadOptions opts;
  opts.scale = 0.1;
  const auto recs = load_trajectories(in, TrajectoryFormat::kEdinburgh, opts);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].trajectory.size(), 3u);
  EXPECT_NEAR(recs[0].trajectory.back().x(), 2.0, 1e-12);
}

TEST(LoadTrajectories, LabelsByEndpointRegion) {
  const IntentionMap map({{0, {0, 0}, 0.75}, {1, {10, 0}, 0.75}}, {{1}, {0}});
  const auto recs = parse_csv("ped_id,frame,x,y\na,0,5,0\na,1,9.5,0.2\nb,0,5,0\nb,1,5,5\n", &map);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].goal_region_id, 1);
  EXPECT_FALSE(recs[1].goal_region_id.has_value());
}

TEST(LoadTrajectories, GeneratorOutputRoundTrips) {
  auto cfg = small_config(12, 3);
  cfg.intention_switch_probability = 0.5;
  const auto recs = generate_synthetic(cfg);
  std::ostringstream csv;
  std::ostringstream labels;
  save_normalized_csv(csv, recs);
  save_labels_csv(labels, recs);
  auto back = parse_csv(csv.str());
  std::istringstream lin(labels.str());
  apply_labels_csv(lin, back);
  EXPECT_EQ(back, recs);
}

TEST(MapJson, RoundTrip) {
  const auto map = build_boundary_map({0, 0, 20, 15}, 8, 1.5);
  EXPECT_EQ(map_from_json(map_to_json(map)), map);
}

TEST(BoundaryMap, FourRegionsFormACycle) {
  const auto map = build_boundary_map({0, 0, 10, 10}, 4, 1.5);
  ASSERT_EQ(map.size(), 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(map.adjacent(i).size(), 2u);
  }
}

TEST(BoundaryMap, ThirtyFourRegionsOfOnePointFiveMeters) {
  const auto map = build_boundary_map({0, 0, 24, 16}, 34, 1.5);
  ASSERT_EQ(map.size(), 34);
  for (const auto& r : map.regions()) {
    EXPECT_EQ(r.half_width, 0.75);
  }
}

TEST(BoundaryMap, TooManyRegionsIsAnError) {
  EXPECT_THROW(build_boundary_map({0, 0, 4, 4}, 34, 1.5), std::invalid_argument);
  EXPECT_THROW(build_boundary_map({0, 0, 10, 10}, 1, 1.5), std::invalid_argument);
}

TEST(BoundaryMap, AdjacencySymmetricSingleCycleNoOverlap) {
  for (int n = 2; n <= 30; ++n) {
    const auto map = build_boundary_map({0, 0, 30, 20}, n, 1.5);
    // Exhaustive symmetry check.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_EQ(map.are_adjacent(i, j), map.are_adjacent(j, i));
      }
    }
    // Walking the neighbor relation from 0 visits every region once.
    std::set<int> seen{0};
    int prev = -1;
    int cur = 0;
    for (int step = 1; step < n; ++step) {
      const auto& adj = map.adjacent(cur);
      const int next = adj[0] != prev ? adj[0] : adj.back();
      prev = cur;
      cur = next;
      seen.insert(cur);
    }
    EXPECT_EQ(static_cast<int>(seen.size()), n) << n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Position d = map.region(i).center - map.region(j).center;
        EXPECT_GE(d.cwiseAbs().maxCoeff(), 1.5 - 1e-9);
      }
    }
  }
}

TEST(GenerateSynthetic, NoiselessLegIsStraightAndIlmExact) {
  auto cfg = small_config(20, 5);
  cfg.heading_noise_std = 0;
  cfg.position_noise_std = 0;
  cfg.curvature_amplitude = 0;
  for (const auto& rec : generate_synthetic(cfg)) {
    const auto& t = rec.trajectory;
    const Position goal = t.back();
    const int steps = static_cast<int>(t.size()) - 1;
    const Trajectory pred = ilm_predict(t.head(1), goal, steps);
    for (int k = 0; k < steps; ++k) {
      EXPECT_NEAR((pred[k] - t[k + 1]).norm(), 0.0, 1e-9);
    }
  }
}

TEST(GenerateSynthetic, DeterministicGivenSeed) {
  const auto cfg = small_config(15, 9);
  EXPECT_EQ(generate_synthetic(cfg), generate_synthetic(cfg));
  auto other = cfg;
  other.rng_seed = 10;
  EXPECT_NE(generate_synthetic(other), generate_synthetic(cfg));
}

TEST(GenerateSynthetic, SwitchProbabilityOneSetsEverySwitchFrame) {
  auto cfg = small_config(40, 2);
  cfg.intention_switch_probability = 1.0;
  for (const auto& rec : generate_synthetic(cfg)) {
    ASSERT_TRUE(rec.switch_frame.has_value()) << rec.pedestrian_id;
    EXPECT_GT(*rec.switch_frame, 0);
    EXPECT_LT(*rec.switch_frame, static_cast<int>(rec.trajectory.size()));
  }
}

TEST(GenerateSynthetic, LabelsContainTheEndpoint) {
  auto cfg = small_config(60, 4);
  cfg.intention_switch_probability = 0.3;
  for (const auto& rec : generate_synthetic(cfg)) {
    ASSERT_TRUE(rec.goal_region_id.has_value());
    EXPECT_TRUE(region_contains(cfg.map.region(*rec.goal_region_id), rec.trajectory.back()));
    EXPECT_GE(rec.trajectory.size(), 2u);
  }
}

TEST(GenerateSynthetic, InvalidConfigRejected) {
  auto cfg = small_config(5, 1);
  cfg.heading_noise_std = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config(5, 1);
  cfg.intention_switch_probability = 1.5;
  EXPECT_THROW(generate_synthetic(cfg), std::invalid_argument);
}

TEST(SplitCorpus, EightyTwenty) {
  const auto recs = generate_synthetic(small_config(10, 1));
  const auto [train, test] = split_corpus(recs, 0.8, 7);
  EXPECT_EQ(train.size(), 8u);
  EXPECT_EQ(test.size(), 2u);
}

TEST(SplitCorpus, EmptyInput) {
  const auto [train, test] = split_corpus({}, 0.8, 7);
  EXPECT_TRUE(train.empty());
  EXPECT_TRUE(test.empty());
}

TEST(SplitCorpus, MultisetUnionAndDeterminism) {
  const auto recs = generate_synthetic(small_config(37, 8));
  for (double f : {0.1, 0.5, 0.8, 0.95}) {
    const auto [train, test] = split_corpus(recs, f, 42);
    EXPECT_LE(std::abs(static_cast<double>(train.size()) - f * 37), 1.0);
    std::multiset<std::string> got;
    for (const auto& r : train) got.insert(r.pedestrian_id);
    for (const auto& r : test) got.insert(r.pedestrian_id);
    std::multiset<std::string> want;
    for (const auto& r : recs) want.insert(r.pedestrian_id);
    EXPECT_EQ(got, want);
    EXPECT_EQ(split_corpus(recs, f, 42).first, train);
  }
  EXPECT_THROW(split_corpus(recs, 1.0, 1), std::invalid_argument);
}

TEST(SynthConfigJson, RoundTrip) {
  const auto cfg = small_config(7, 123);
  const auto back = synth_config_from_json(synth_config_to_json(cfg));
  EXPECT_EQ(generate_synthetic(back), generate_synthetic(cfg));
}

}  // namespace
}  // namespace mif
