// Copyright 2026 The SessionForge Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "sessionforge/metrics.hpp"
#include "sessionforge/rng.hpp"
#include "sessionforge/sync.hpp"
#include "sessionforge/synth.hpp"
#include "test_support.hpp"

namespace sessionforge::synth {
namespace {

using testing::TempDir;

double norm3(const Point& p) { return std::hypot(p[0], p[1], p[2]); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Rng, SplitMixReferenceOutputs) {
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 0x599ed017fb08fc85ULL);
  EXPECT_EQ(rng.next(), 0x2c73f08458540fa5ULL);
  EXPECT_EQ(rng.next(), 0x883ebce5a3f27c77ULL);
  SplitMix64 u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  SplitMix64 rng(77);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(MinJerk, ZeroDisplacementIsFlat) {
  const auto t = gen_min_jerk_trajectory({0, 0, 0}, {0, 0, 0}, 2.0, 12.0);
  EXPECT_EQ(t.positions.size(), 25u);
  for (const auto& p : t.positions) EXPECT_EQ(norm3(p), 0.0);
  EXPECT_EQ(t.mean_jerk, 0.0);
  EXPECT_EQ(t.path_length, 0.0);
}

TEST(MinJerk, UnitMoveClosedForms) {
  const auto t = gen_min_jerk_trajectory({0, 0, 0}, {1, 0, 0}, 2.0, 12.0);
  EXPECT_NEAR(t.path_length, 1.0, 1e-12);
  EXPECT_NEAR(metrics::path_length(t.positions), 1.0, 1e-12);
  EXPECT_NEAR(t.mean_jerk, oracle::min_jerk_mean_jerk(1.0, 2.0), 1e-9);
  EXPECT_EQ(t.positions.front(), (Point{0, 0, 0}));
  EXPECT_NEAR(t.positions.back()[0], 1.0, 1e-15);
  EXPECT_NEAR(t.positions[12][0], 0.5, 1e-15);
  EXPECT_SF_ERROR(gen_min_jerk_trajectory({0, 0, 0}, {1, 0, 0}, 0.0, 12.0), "synth_generator", "InvalidScenario");
}

TEST(MinJerk, FiniteDifferenceConvergesToAnalyticJerk) {
  const MotionProfile p{ProfileKind::MinJerk, {0, 0, 0}, {0.4, -0.3, 0.2}, 0.0, 1.5};
  double prev = 1e9;
  for (double fs : {50.0, 200.0, 800.0}) {
    const double h = 1.0 / fs;
    double worst = 0.0;
    for (double t = 0.2; t < 1.3; t += 0.05) {
      const auto a = position(p, t - 1.5 * h);
      const auto b = position(p, t - 0.5 * h);
      const auto c = position(p, t + 0.5 * h);
      const auto d = position(p, t + 1.5 * h);
      const auto j = jerk(p, t);
      for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs((d[i] - 3 * c[i] + 3 * b[i] - a[i]) / (h * h * h) - j[i]));
      }
    }
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(GroundTruth, MatchesClosedFormsForDefaultScenario) {
  Scenario sc;
  const auto g = gen_session(sc);
  const double dee = norm3({0.3, 0.2, 0.1});
  EXPECT_NEAR(g.truth.ee_mean_jerk, oracle::min_jerk_mean_jerk(dee, 4.0) * 4.0 / 10.0, 1e-9);
  EXPECT_NEAR(g.truth.ee_path_length, dee, 1e-9);
  EXPECT_NEAR(g.truth.wheelchair_mean_jerk, oracle::min_jerk_mean_jerk(0.5, 6.0) * 6.0 / 10.0, 1e-9);
  EXPECT_NEAR(g.truth.wheelchair_path_length, 0.5, 1e-9);
  EXPECT_EQ(g.truth.duration, 10.0);
}

TEST(GroundTruth, CubicProfile) {
  Scenario sc;
  sc.ee_profile = {ProfileKind::Cubic, {0, 0, 0}, {1, 0, 0}, 2.0, 4.0};
  sc.audio = false;
  const auto g = gen_session(sc);
  // p = (t - 2)^3 / 64 on [0, 10]: constant jerk 6 / 64, path |p(0)| + p(10).
  EXPECT_NEAR(g.truth.ee_mean_jerk, 6.0 / 64.0, 1e-9);
  EXPECT_NEAR(g.truth.ee_path_length, (8.0 + 512.0) / 64.0, 1e-9);
  const auto& ee = g.session.numeric.at("ee_pose");
  for (std::size_t k = 0; k < ee.size(); k += 97) {
    EXPECT_NEAR(ee.value(k, 0), std::pow(ee.timestamps[k] - 2.0, 3) / 64.0, 1e-12);
  }
}

TEST(GenSession, SameSeedGivesByteIdenticalContainers) {
  Scenario sc;
  sc.seed = 2024;
  sc.timestamp_jitter_sd = 0.004;
  sc.noise_sd = {{"ee_pose", 0.01}, {"wheelchair", 0.005}};
  sc.udp_loss_rate = 0.05;
  sc.extra_streams = true;
  TempDir a;
  TempDir b;
  write_generated(gen_session(sc), sc, a.path());
  write_generated(gen_session(sc), sc, b.path());
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    ASSERT_EQ(slurp(e.path()), slurp(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_GT(files, 8u);
  EXPECT_EQ(gen_session(sc).session, load_session(a.path()));
  auto other = sc;
  other.seed = 2025;
  EXPECT_NE(gen_session(other).session.numeric.at("ee_pose"), gen_session(sc).session.numeric.at("ee_pose"));
}

TEST(GenSession, ValidContainerWithExpectedStreams) {
  Scenario sc;
  sc.extra_streams = true;
  const auto g = gen_session(sc);
  EXPECT_FALSE(has_errors(validate_session(g.session)));
  for (const char* name : {"ee_pose", "wheelchair", "arm_joints", "imu"}) EXPECT_TRUE(g.session.numeric.count(name)) << name;
  EXPECT_TRUE(g.session.video.count("camera_0"));
  EXPECT_TRUE(g.session.video.count("camera_1"));
  EXPECT_EQ(g.session.audio.size(), 1u);
  ASSERT_TRUE(g.session.dialogue);
  EXPECT_EQ(g.session.manifest.session_id, "synth-0");
  EXPECT_EQ(g.session.manifest.success, true);
}

TEST(GenSession, JitterStaysBoundedAndOrdered) {
  Scenario sc;
  sc.seed = 3;
  sc.timestamp_jitter_sd = 0.05;
  sc.audio = false;
  const auto g = gen_session(sc);
  for (const auto& [name, log] : g.session.video) {
    const double rate = g.session.manifest.find_stream(name)->nominal_rate;
    ASSERT_GE(log.timestamps.front(), 0.0);
    for (std::size_t k = 0; k < log.timestamps.size(); ++k) {
      ASSERT_LE(std::abs(log.timestamps[k] - k / rate), 0.45 / rate + 1e-12);
      if (k > 0) ASSERT_GT(log.timestamps[k], log.timestamps[k - 1]);
    }
  }
}

TEST(GenSession, NoJitterMeansFullAcceptanceAtHalfPeriod) {
  Scenario sc;
  sc.seed = 8;
  sc.audio = false;
  sc.video_rates = {12.0, 15.0, 30.0};
  const auto synced = sync::sync_session(gen_session(sc).session);
  for (const auto& sel : synced.selections) EXPECT_EQ(sel.acceptance_rate(), 1.0) << sel.stream;
}

TEST(GenSession, NoiseIsOnValuesOnly) {
  Scenario sc;
  sc.seed = 10;
  sc.audio = false;
  auto noisy = sc;
  noisy.noise_sd["ee_pose"] = 0.01;
  const auto a = gen_session(sc).session.numeric.at("ee_pose");
  const auto b = gen_session(noisy).session.numeric.at("ee_pose");
  EXPECT_EQ(a.timestamps, b.timestamps);
  double ss = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) ss += std::pow(b.value(k, 0) - a.value(k, 0), 2);
  EXPECT_NEAR(std::sqrt(ss / a.size()), 0.01, 0.001);
  for (std::size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a.value(k, 6), b.value(k, 6));
}

TEST(GenSession, AudioLossAccounting) {
  Scenario sc;
  sc.seed = 5;
  sc.udp_loss_rate = 0.1;
  const auto g = gen_session(sc);
  EXPECT_EQ(g.audio.sent.size(), g.audio.delivered.size() + g.audio.lost.size());
  EXPECT_GT(g.audio.lost.size(), 0u);
  const auto& track = g.session.audio.begin()->second;
  EXPECT_EQ(track.samples.size(), g.audio.sent.size() * kAudioChunkSamples);
}

TEST(Scenario, JsonRoundTripAndValidation) {
  Scenario sc;
  sc.seed = 99;
  sc.task = Task::DoorOpening;
  sc.noise_sd = {{"ee_pose", 0.002}};
  sc.success = false;
  sc.flags = {"ObjectDrop"};
  sc.ee_profile.kind = ProfileKind::Cubic;
  EXPECT_EQ(scenario_from_json(scenario_to_json(sc)), sc);
  auto bad = sc;
  bad.flags.clear();
  EXPECT_SF_ERROR(check_scenario(bad), "synth_generator", "InvalidScenario");
  auto unlabeled_with_flags = sc;
  unlabeled_with_flags.success.reset();
  EXPECT_SF_ERROR(check_scenario(unlabeled_with_flags), "synth_generator", "InvalidScenario");
  bad = Scenario{};
  bad.duration = -1;
  EXPECT_SF_ERROR(gen_session(bad), "synth_generator", "InvalidScenario");
  bad = Scenario{};
  bad.udp_loss_rate = 1.0;
  EXPECT_SF_ERROR(check_scenario(bad), "synth_generator", "InvalidScenario");
  EXPECT_SF_ERROR(scenario_from_json("[1]"), "synth_generator", "InvalidScenario");
}

TEST(ExpandDataset, CyclesTasksAndVariesTrials) {
  Scenario base;
  base.seed = 100;
  const auto all = expand_dataset(base, 12);
  ASSERT_EQ(all.size(), 12u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].task, kAllTasks[i % 5]);
    EXPECT_EQ(all[i].seed, 100 + i);
    EXPECT_EQ(all[i].session_id.rfind("trial-" + std::string(i < 10 ? "00" : "0") + std::to_string(i), 0), 0u);
    EXPECT_EQ(all[i].wheelchair_profile.kind == ProfileKind::Stationary, all[i].task != Task::DoorOpening);
    const double scale = norm3(all[i].ee_profile.end) / norm3(base.ee_profile.end);
    EXPECT_GE(scale, 0.8 - 1e-12);
    EXPECT_LE(scale, 1.2 + 1e-12);
    EXPECT_GE(all[i].ee_profile.T, 0.9 * base.ee_profile.T - 1e-12);
    EXPECT_LE(all[i].ee_profile.T, 1.1 * base.ee_profile.T + 1e-12);
    EXPECT_NO_THROW(check_scenario(all[i]));
  }
  EXPECT_EQ(expand_dataset(base, 12), all);
  EXPECT_NE(all[0].ee_profile, all[5].ee_profile);
}

}  // namespace
}  // namespace sessionforge::synth
