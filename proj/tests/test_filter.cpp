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
#include "mif/filter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace mif {
namespace {

double weight_sum(const std::vector<Particle>& ps) {
  double s = 0;
  for (const auto& p : ps) s += p.weight;
  return s;
}

std::vector<Particle> uniform_particles(const std::vector<int>& intentions) {
  std::vector<Particle> ps;
  for (int i : intentions) ps.push_back({1.0 / intentions.size(), i, std::nullopt});
  return ps;
}

IntentionMap line_map() {
  // Point-like regions ahead of and behind a pedestrian walking along +x.
  return IntentionMap({{0, {20, 0}, 0.0}, {1, {-20, 0}, 0.0}, {2, {4.5, 6.0}, 0.0}},
                      {{}, {}, {}});
}

Trajectory straight_walk(int frames) {
  Path p(frames, 2);
  for (int k = 0; k < frames; ++k) p.row(k) << 0.5 * k, 0.0;
  return Trajectory(p);
}

std::vector<TrajectoryRecord> straight_corpus(int n, std::uint64_t seed) {
  SynthConfig cfg{build_boundary_map({0, 0, 20, 15}, 8, 1.5)};
  cfg.num_trajectories = n;
  cfg.min_travel_distance = 8.0;
  cfg.rng_seed = seed;
  return generate_synthetic(cfg);
}

TEST(InitParticles, SingleParticle) {
  Rng rng(1);
  const auto ps = init_particles(5, 1, rng);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].weight, 1.0);
}

TEST(InitParticles, BinomialCounts) {
  Rng rng(2);
  const auto ps = init_particles(34, 340, rng);
  std::vector<int> counts(34, 0);
  for (const auto& p : ps) {
    EXPECT_EQ(p.weight, 1.0 / 340);
    ++counts[p.intention];
  }
  const double sigma = std::sqrt(340.0 * (1.0 / 34) * (33.0 / 34));
  for (int c : counts) EXPECT_LT(std::abs(c - 10.0), 4 * sigma);
}

TEST(InitParticles, BeliefUniformInExpectation) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
  const int seeds = 400;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(s);
    mean += aggregate_belief(init_particles(8, 100, rng), 8).probabilities;
  }
  mean /= seeds;
  // Each entry averages 40000 Bernoulli(1/8) draws.
  const double sigma = std::sqrt((1.0 / 8) * (7.0 / 8) / (seeds * 100.0));
  for (int j = 0; j < 8; ++j) EXPECT_LT(std::abs(mean(j) - 0.125), 4 * sigma);
}

TEST(TruncatedPredict, WarmupWhileObservationShort) {
  Rng rng(3);
  const LinearIntentionModel ilm;
  const auto ps = uniform_particles({0, 1});
  EXPECT_FALSE(truncated_predict(ps, line_map(), straight_walk(21), ilm, 20, rng).has_value());
  EXPECT_TRUE(truncated_predict(ps, line_map(), straight_walk(22), ilm, 20, rng).has_value());
}

TEST(TruncatedPredict, CorrectIntentionReproducesTruth) {
  Rng rng(4);
  const LinearIntentionModel ilm;
  const Trajectory obs = straight_walk(30);
  const auto preds = truncated_predict(uniform_particles({0, 1}), line_map(), obs, ilm, 20, rng);
  ASSERT_TRUE(preds.has_value());
  const Trajectory truth = obs.tail(20);
  EXPECT_NEAR(segment_distance((*preds)[0], truth), 0.0, 1e-12);
  EXPECT_GT(segment_distance((*preds)[1], truth), segment_distance((*preds)[0], truth));
}

TEST(TruncatedPredict, ShortHorizonIsPaddedToLookback) {
  Rng rng(5);
  const LinearIntentionModel ilm;
  // Region 2 is about 6 m away, well under 20 steps of 0.5 m.
  const auto preds =
      truncated_predict(uniform_particles({0, 1, 2}), line_map(), straight_walk(30), ilm, 20, rng);
  ASSERT_TRUE(preds.has_value());
  for (const auto& p : *preds) EXPECT_EQ(p.size(), 20u);
  const Trajectory& near = (*preds)[2];
  EXPECT_EQ(near.back(), Position(4.5, 6.0));
  EXPECT_EQ(near[18], near[19]);
}

TEST(WeightUpdate, SingleParticleStaysOne) {
  auto ps = uniform_particles({0});
  EXPECT_FALSE(weight_update_from_distances(ps, {3.7}, 10.0));
  EXPECT_EQ(ps[0].weight, 1.0);
}

TEST(WeightUpdate, EqualDistancesStayEven) {
  auto ps = uniform_particles({0, 1});
  weight_update_from_distances(ps, {2.0, 2.0}, 1.0);
  EXPECT_EQ(ps[0].weight, 0.5);
  EXPECT_EQ(ps[1].weight, 0.5);
}

TEST(WeightUpdate, ClosedFormTwoParticles) {
  auto ps = uniform_particles({0, 1});
  weight_update_from_distances(ps, {0.0, 1.0}, 1.0);
  const double e = std::exp(-1.0);
  EXPECT_NEAR(ps[0].weight, 1.0 / (1.0 + e), 1e-12);
  EXPECT_NEAR(ps[1].weight, e / (1.0 + e), 1e-12);
  EXPECT_NEAR(ps[0].weight, 0.731059, 1e-6);
  EXPECT_NEAR(ps[1].weight, 0.268941, 1e-6);
}

TEST(WeightUpdate, FromTrajectoriesUsesSegmentDistance) {
  auto ps = uniform_particles({0, 1});
  const auto truth = Trajectory::from_points({{0, 0}, {1, 0}});
  const std::vector<Trajectory> preds{truth, Trajectory::from_points({{0, 0}, {1, 1}})};
  weight_update(ps, preds, truth, 1.0);
  EXPECT_NEAR(ps[0].weight, 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
}

TEST(WeightUpdate, LargeDistancesDoNotUnderflow) {
  auto ps = uniform_particles({0, 1});
  EXPECT_FALSE(weight_update_from_distances(ps, {1e6, 1e6 + 1}, 10.0));
  EXPECT_NEAR(ps[0].weight, 1.0 / (1.0 + std::exp(-10.0)), 1e-12);
}

TEST(WeightUpdate, DegenerateInputFallsBackToUniform) {
  std::vector<Particle> ps{{0.9, 0, std::nullopt}, {0.1, 1, std::nullopt}};
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(weight_update_from_distances(ps, {inf, inf}, 1.0));
  EXPECT_EQ(ps[0].weight, 0.5);
  EXPECT_EQ(ps[1].weight, 0.5);
}

TEST(WeightUpdate, NormalizedOnRandomInstances) {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    auto ps = init_particles(5, 50, rng);
    std::vector<double> d(50);
    for (auto& x : d) x = u(rng);
    weight_update_from_distances(ps, d, trial % 2 ? 10.0 : 1.0);
    EXPECT_NEAR(weight_sum(ps), 1.0, 1e-9);
    for (const auto& p : ps) EXPECT_TRUE(p.weight >= 0 && p.weight <= 1);
  }
}

TEST(ResampleSir, DegenerateWeightsCopyOneParticle) {
  Rng rng(7);
  std::vector<Particle> ps{{0, 0, {}}, {1.0, 4, {}}, {0, 2, {}}, {0, 1, {}}};
  resample_sir(ps, rng);
  ASSERT_EQ(ps.size(), 4u);
  for (const auto& p : ps) {
    EXPECT_EQ(p.intention, 4);
    EXPECT_EQ(p.weight, 0.25);
  }
}

TEST(ResampleSir, UniformWeightsKeepTheMultiset) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto ps = init_particles(6, 30, rng);
    std::multiset<int> before;
    for (const auto& p : ps) before.insert(p.intention);
    resample_sir(ps, rng);
    std::multiset<int> after;
    for (const auto& p : ps) after.insert(p.intention);
    EXPECT_EQ(before, after);
  }
}

TEST(ResampleSir, OffspringMomentsMatchWeights) {
  Eigen::VectorXd w(10);
  w << 0.02, 0.18, 0.05, 0.25, 0.01, 0.09, 0.13, 0.07, 0.15, 0.05;
  const int trials = 10000;
  Rng rng(9);
  std::vector<Particle> base;
  for (int i = 0; i < 10; ++i) base.push_back({w(i), i, std::nullopt});
  std::vector<double> sum(10, 0.0);
  for (int t = 0; t < trials; ++t) {
    auto ps = base;
    resample_sir(ps, rng);
    ASSERT_EQ(ps.size(), 10u);
    EXPECT_NEAR(weight_sum(ps), 1.0, 1e-9);
    for (const auto& p : ps) sum[p.intention] += 1;
  }
  for (int i = 0; i < 10; ++i) {
    const double expect = 10 * w(i);
    // Systematic offspring are floor or ceil of M w; the variance is f(1-f).
    const double f = expect - std::floor(expect);
    const double sigma = std::sqrt(f * (1 - f) / trials);
    EXPECT_LE(std::abs(sum[i] / trials - expect), 3 * sigma + 1e-12) << i;
  }
}

TEST(SystematicOffspring, CountsAreFloorOrCeil) {
  Rng rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(12, [&] { return u(rng); });
    w /= w.sum();
    const auto counts = systematic_offspring(w, u(rng) / 12);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), 0), 12);
    for (int i = 0; i < 12; ++i) {
      EXPECT_GE(counts[i], std::floor(12 * w(i)) - 1e-9);
      EXPECT_LE(counts[i], std::ceil(12 * w(i)) + 1e-9);
    }
  }
}

TEST(MutateIntentions, ZeroProbabilityIsIdentity) {
  Rng rng(11);
  auto ps = init_particles(8, 200, rng);
  const auto before = ps;
  EXPECT_EQ(mutate_intentions(ps, 0.0, 8, rng), 0);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(ps[i].intention, before[i].intention);
}

TEST(MutateIntentions, ProbabilityOneAlwaysChanges) {
  Rng rng(12);
  auto ps = init_particles(5, 500, rng);
  const auto before = ps;
  EXPECT_EQ(mutate_intentions(ps, 1.0, 5, rng), 500);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_NE(ps[i].intention, before[i].intention);
    EXPECT_EQ(ps[i].weight, before[i].weight);
  }
}

TEST(MutateIntentions, BinomialFraction) {
  Rng rng(13);
  auto ps = init_particles(34, 100000, rng);
  const auto before = ps;
  const int count = mutate_intentions(ps, 0.01, 34, rng);
  int changed = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) changed += ps[i].intention != before[i].intention;
  EXPECT_EQ(changed, count);
  const double sigma = std::sqrt(1e5 * 0.01 * 0.99);
  EXPECT_LT(std::abs(count - 1000.0), 4 * sigma);
}

TEST(MutateIntentions, TargetsUniformOverOthers) {
  Rng rng(14);
  std::vector<Particle> ps(40000, Particle{1.0 / 40000, 2, std::nullopt});
  mutate_intentions(ps, 1.0, 5, rng);
  std::map<int, int> counts;
  for (const auto& p : ps) ++counts[p.intention];
  EXPECT_EQ(counts.count(2), 0u);
  const double sigma = std::sqrt(40000 * 0.25 * 0.75);
  for (int j : {0, 1, 3, 4}) EXPECT_LT(std::abs(counts[j] - 10000.0), 4 * sigma);
}

TEST(MutateIntentions, SingleIntentionIsNoOp) {
  Rng rng(15);
  auto ps = init_particles(1, 10, rng);
  EXPECT_EQ(mutate_intentions(ps, 1.0, 1, rng), 0);
  for (const auto& p : ps) EXPECT_EQ(p.intention, 0);
}

TEST(MutateIntentions, ExtinctIntentionReappearsGeometrically) {
  const int m = 8;
  const int M = 100;
  const double p = 0.01;
  const double q = 1.0 - std::pow(1.0 - p / (m - 1), M);
  Rng rng(16);
  const int trials = 3000;
  double total = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Particle> ps(M, Particle{1.0 / M, 0, std::nullopt});
    int gens = 0;
    bool seen = false;
    while (!seen) {
      ++gens;
      mutate_intentions(ps, p, m, rng);
      for (const auto& x : ps) seen = seen || x.intention == 5;
      // Survivors of the mutation pass are reset so each generation is
      // an independent trial from the extinct state.
      for (auto& x : ps) x.intention = 0;
    }
    total += gens;
  }
  const double mean = total / trials;
  const double sd = std::sqrt((1 - q) / (q * q) / trials);
  EXPECT_LT(std::abs(mean - 1.0 / q), 4 * sd);
  // The approximation quoted for the expected wait.
  EXPECT_NEAR(1.0 / q, 1.0 / (M * p / (m - 1)), 1.0);
}

TEST(AggregateBelief, OneHot) {
  const auto b = aggregate_belief(uniform_particles({3, 3, 3}), 5);
  EXPECT_EQ(b.probabilities(3), 1.0);
  EXPECT_EQ(b.probabilities.sum(), 1.0);
  EXPECT_EQ(b.argmax(), 3);
}

TEST(AggregateBelief, EvenSplit) {
  const auto b = aggregate_belief(uniform_particles({0, 1, 0, 1}), 2);
  EXPECT_EQ(b.probabilities(0), 0.5);
  EXPECT_EQ(b.probabilities(1), 0.5);
}

TEST(AggregateBelief, MatchesGrouping) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    auto ps = init_particles(7, 60, rng);
    double total = 0;
    for (auto& p : ps) total += (p.weight = u(rng));
    for (auto& p : ps) p.weight /= total;
    std::map<int, double> groups;
    for (const auto& p : ps) groups[p.intention] += p.weight;
    const auto b = aggregate_belief(ps, 7);
    for (int j = 0; j < 7; ++j) EXPECT_NEAR(b.probabilities(j), groups[j], 1e-12);
    EXPECT_NEAR(b.probabilities.sum(), 1.0, 1e-9);
  }
}

TEST(TopIntentions, TiesAtCutoffIncluded) {
  Belief b{Eigen::Vector4d(0.4, 0.2, 0.2, 0.2)};
  EXPECT_EQ(top_intentions(b, 1), (std::vector<int>{0}));
  EXPECT_EQ(top_intentions(b, 2), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_THROW(top_intentions(b, 0), std::invalid_argument);
  EXPECT_THROW(top_intentions(b, 5), std::invalid_argument);
}

TEST(SelectTopSamples, FullSetAndOneHot) {
  const std::vector<int> ids{0, 1, 2, 1, 0, 3};
  Belief b{Eigen::Vector4d(0.1, 0.6, 0.2, 0.1)};
  EXPECT_EQ(select_top_samples(ids, b, 4).size(), ids.size());
  Belief hot{Eigen::Vector4d(0, 0, 1, 0)};
  EXPECT_EQ(select_top_samples(ids, hot, 1), (std::vector<std::size_t>{2}));
}

TEST(SelectTopSamples, NestedInNti) {
  Rng rng(18);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::VectorXd p = Eigen::VectorXd::NullaryExpr(8, [&] { return std::round(u(rng) * 5); });
    if (p.sum() == 0) p(0) = 1;
    Belief b{p / p.sum()};
    std::vector<int> ids(50);
    for (auto& i : ids) i = pick(rng);
    std::set<std::size_t> prev;
    for (int nti = 1; nti <= 8; ++nti) {
      const auto sel = select_top_samples(ids, b, nti);
      const std::set<std::size_t> cur(sel.begin(), sel.end());
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
    EXPECT_EQ(prev.size(), ids.size());
  }
}

struct FilterTrace {
  std::vector<FilterStep> steps;
};

FilterTrace run_on(const Trajectory& t, const IntentionMap& map, const FilterConfig& cfg,
                   std::uint64_t seed, const MotionModel& model,
                   std::optional<std::vector<Particle>> start = std::nullopt) {
  MutableIntentionFilter f(map, cfg, model, seed);
  if (start) f.set_particles(*start);
  FilterTrace out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    f.observe(t[k]);
    if (k >= 1 && (k + 1) % cfg.iterate_every == 0) {
      out.steps.push_back(f.step());
      EXPECT_EQ(static_cast<int>(f.particles().size()), cfg.num_particles);
      EXPECT_NEAR(weight_sum(f.particles()), 1.0, 1e-9);
      EXPECT_NEAR(out.steps.back().belief.probabilities.sum(), 1.0, 1e-9);
    }
  }
  return out;
}

TEST(FilterStep, ConvergesOnNoiselessStraightTrajectories) {
  const LinearIntentionModel ilm;
  const auto corpus = straight_corpus(10, 19);
  const auto& map = build_boundary_map({0, 0, 20, 15}, 8, 1.5);
  for (double tau : {1.0, 10.0}) {
    FilterConfig cfg;
    cfg.num_particles = 100;
    cfg.tau = tau;
    cfg.p_mutation = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto trace = run_on(corpus[i].trajectory, map, cfg, 100 + i, ilm);
      const int truth = *corpus[i].goal_region_id;
      EXPECT_EQ(trace.steps.back().belief.argmax(), truth) << "tau " << tau << " #" << i;
      if (tau == 10.0) {
        int updates = 0;
        for (const auto& s : trace.steps) {
          if (!s.warmup && ++updates == 10) {
            EXPECT_GT(s.belief.probabilities(truth), 0.9) << i;
          }
        }
        ASSERT_GE(updates, 10);
      }
    }
  }
}

TEST(FilterStep, WarmupKeepsParticlesAndStillSamples) {
  const LinearIntentionModel ilm;
  FilterConfig cfg;
  cfg.num_particles = 20;
  MutableIntentionFilter f(line_map(), cfg, ilm, 1);
  const auto before = f.particles();
  const Trajectory t = straight_walk(5);
  for (std::size_t k = 0; k < t.size(); ++k) f.observe(t[k]);
  const FilterStep s = f.step();
  EXPECT_TRUE(s.warmup);
  EXPECT_EQ(s.mutations, 0);
  EXPECT_EQ(s.samples.size(), 20u);
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_EQ(f.particles()[i].intention, before[i].intention);
    EXPECT_EQ(s.sample_intentions[i], before[i].intention);
  }
  EXPECT_TRUE(s.belief.probabilities == aggregate_belief(before, 3).probabilities);
}

TEST(FilterStep, ExtinctIntentionStaysExtinctWithoutMutation) {
  const LinearIntentionModel ilm;
  SynthConfig sc{build_boundary_map({0, 0, 20, 15}, 8, 1.5)};
  sc.num_trajectories = 6;
  sc.intention_switch_probability = 1.0;
  sc.min_travel_distance = 8;
  sc.rng_seed = 20;
  FilterConfig cfg;
  cfg.num_particles = 60;
  cfg.tau = 10;
  cfg.p_mutation = 0.0;
  for (const auto& rec : generate_synthetic(sc)) {
    const auto trace = run_on(rec.trajectory, sc.map, cfg, 7, ilm);
    std::set<int> live;
    for (int j = 0; j < 8; ++j) live.insert(j);
    for (const auto& s : trace.steps) {
      std::set<int> now;
      for (int j = 0; j < 8; ++j) {
        if (s.belief.probabilities(j) > 0) now.insert(j);
        if (!live.count(j)) EXPECT_EQ(s.belief.probabilities(j), 0.0);
      }
      EXPECT_TRUE(std::includes(live.begin(), live.end(), now.begin(), now.end()));
      live = now;
    }
  }
}

TEST(FilterStep, DeterministicGivenSeed) {
  const LinearIntentionModel ilm;
  const auto rec = straight_corpus(1, 21)[0];
  const auto map = build_boundary_map({0, 0, 20, 15}, 8, 1.5);
  FilterConfig cfg;
  cfg.num_particles = 50;
  const auto a = run_on(rec.trajectory, map, cfg, 5, ilm);
  const auto b = run_on(rec.trajectory, map, cfg, 5, ilm);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_TRUE(a.steps[i].belief.probabilities == b.steps[i].belief.probabilities);
    EXPECT_EQ(a.steps[i].samples, b.steps[i].samples);
  }
}

TEST(FilterStep, SetParticlesValidates) {
  const LinearIntentionModel ilm;
  FilterConfig cfg;
  cfg.num_particles = 2;
  MutableIntentionFilter f(line_map(), cfg, ilm, 1);
  EXPECT_THROW(f.set_particles(uniform_particles({0})), std::invalid_argument);
  EXPECT_THROW(f.set_particles(uniform_particles({0, 9})), std::invalid_argument);
  EXPECT_NO_THROW(f.set_particles(uniform_particles({2, 2})));
}

TEST(FilterConfigJson, RoundTripAndValidation) {
  FilterConfig cfg;
  cfg.tau = 10;
  cfg.num_particles = 77;
  cfg.time_to_go.max_steps = 300;
  const auto back = filter_config_from_json(filter_config_to_json(cfg));
  EXPECT_EQ(filter_config_to_json(back), filter_config_to_json(cfg));
  EXPECT_THROW(filter_config_from_json({{"tau", 0.0}}), std::invalid_argument);
  EXPECT_THROW(filter_config_from_json({{"p_mutation", 1.5}}), std::invalid_argument);
  EXPECT_THROW(filter_config_from_json({{"num_particles", 0}}), std::invalid_argument);
}

}  // namespace
}  // namespace mif
