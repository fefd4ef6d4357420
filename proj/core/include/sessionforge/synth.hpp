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

#ifndef SESSIONFORGE_SYNTH_HPP_
#define SESSIONFORGE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/metrics.hpp"
#include "sessionforge/session.hpp"
#include "sessionforge/task.hpp"
#include "sessionforge/wire.hpp"

namespace sessionforge::synth {

using metrics::Point;

enum class ProfileKind { MinJerk, Cubic, Stationary };

std::string_view to_string(ProfileKind kind);
std::optional<ProfileKind> parse_profile_kind(std::string_view s);

// Motion between `start` and `end` over [t0, t0 + T], with s = (t - t0) / T.
//   MinJerk:    start + (end - start)(10s^3 - 15s^4 + 6s^5), s clamped to [0, 1]
//   Cubic:      start + (end - start) s^3, unclamped
//   Stationary: start
struct MotionProfile {
  ProfileKind kind = ProfileKind::Stationary;
  Point start{0.0, 0.0, 0.0};
  Point end{0.0, 0.0, 0.0};
  double t0 = 0.0;
  double T = 1.0;

  bool operator==(const MotionProfile&) const = default;
};

Point position(const MotionProfile& p, double t);
Point velocity(const MotionProfile& p, double t);
Point jerk(const MotionProfile& p, double t);

struct Scenario {
  std::uint64_t seed = 0;
  Task task = Task::Feeding;
  std::string session_id;  // default "synth-<seed>"
  std::string participant_id = "P01";
  std::string created_at = "2026-01-01T00:00:00Z";
  double duration = 10.0;
  MotionProfile ee_profile{ProfileKind::MinJerk, {0.0, 0.0, 0.0}, {0.3, 0.2, 0.1}, 2.0, 4.0};
  // Planar; z is ignored.
  MotionProfile wheelchair_profile{ProfileKind::MinJerk, {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, 1.0, 6.0};
  std::vector<double> video_rates{12.0, 15.0};
  double numeric_rate = 100.0;
  double timestamp_jitter_sd = 0.0;
  std::map<std::string, double> noise_sd;  // stream name -> metres
  double udp_loss_rate = 0.0;
  bool audio = true;
  double audio_tone_hz = 220.0;
  bool dialogue = true;
  bool extra_streams = false;  // arm_joints and imu
  std::optional<bool> success = true;
  std::vector<std::string> flags;

  bool operator==(const Scenario&) const = default;
};

// Errors: InvalidScenario.
void check_scenario(const Scenario& s);
Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& s);

struct GroundTruth {
  double duration = 0.0;
  double ee_mean_jerk = 0.0;          // time average of |p'''| over [0, duration]
  double ee_path_length = 0.0;
  double wheelchair_mean_jerk = 0.0;
  double wheelchair_path_length = 0.0;
  MotionProfile ee_profile;           // clean signal closures
  MotionProfile wheelchair_profile;
};

std::string ground_truth_json(const GroundTruth& truth);

struct MinJerkTrajectory {
  std::vector<double> timestamps;
  std::vector<Point> positions;
  double mean_jerk = 0.0;  // (1/T) * integral of |p'''| over [0, T]
  double path_length = 0.0;
  double duration = 0.0;
};

// Samples k/fs for k = 0 .. floor(T fs). Errors: InvalidScenario.
MinJerkTrajectory gen_min_jerk_trajectory(const Point& p0, const Point& pf, double T, double fs);

// Adaptive Simpson quadrature of |p'''| and |p'| over [a, b].
double integrate_jerk_magnitude(const MotionProfile& p, double a, double b);
double integrate_speed(const MotionProfile& p, double a, double b);

struct AudioLoss {
  std::vector<wire::AudioDatagram> sent;       // every datagram, in order
  std::vector<wire::AudioDatagram> delivered;  // survivors of the loss pattern
  std::set<std::uint32_t> lost;
};

inline constexpr std::size_t kAudioChunkSamples = 480;

struct Generated {
  RawSession session;
  GroundTruth truth;
  AudioLoss audio;
};

// Deterministic in the scenario. Errors: InvalidScenario.
Generated gen_session(const Scenario& scenario);

// Writes the session container plus ground_truth.json and scenario.json.
void write_generated(const Generated& g, const Scenario& scenario,
                     const std::filesystem::path& dir);

// `count` trials cycling through the five tasks, seeds base.seed + i, with
// per-trial amplitude and timing variation drawn from the seed.
std::vector<Scenario> expand_dataset(const Scenario& base, int count);

}  // namespace sessionforge::synth

#endif  // SESSIONFORGE_SYNTH_HPP_
