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

#ifndef SESSIONFORGE_METRICS_HPP_
#define SESSIONFORGE_METRICS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/sync.hpp"
#include "sessionforge/task.hpp"

namespace sessionforge::metrics {

using Point = std::array<double, 3>;  // metres; planar data leaves z = 0

// Jerk magnitude per step from the third forward difference
// (x[k+3] - 3x[k+2] + 3x[k+1] - x[k]) / dt^3, Euclidean norm over axes.
// Returns K - 3 values. Errors: TooFewSamples, InvalidStep.
std::vector<double> jerk_series(std::span<const Point> positions, double dt);

// Errors: Empty.
double trial_mean_jerk(std::span<const double> jerk);

// Sum of Euclidean step lengths. Errors: TooFewSamples.
double path_length(std::span<const Point> positions);

struct TaskAggregate {
  std::size_t n_trial = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample SD (n - 1); absent for one trial
};

// Errors: Empty.
TaskAggregate task_aggregate(std::span<const double> values);

enum class ComfortBand { Below, Within, Above };

inline constexpr double kComfortLow = 0.3;   // m/s^3
inline constexpr double kComfortHigh = 0.9;  // m/s^3
// Whole-body vibration comfort threshold (m/s^2). Acceleration, not jerk:
// carried as context only and never compared with jerk values.
inline constexpr double kIsoWholeBodyComfort = 0.315;

struct ComfortAssessment {
  ComfortBand wheelchair_band = ComfortBand::Below;
  double iso_reference = kIsoWholeBodyComfort;
};

std::string_view to_string(ComfortBand band);

// Inclusive band [0.3, 0.9] m/s^3. Errors: InvalidValue for negative/NaN.
ComfortAssessment comfort_check(double wheelchair_mean_jerk);

struct TrialMetrics {
  std::string trial_id;
  Task task = Task::Feeding;
  double duration = 0.0;          // s
  double ee_path_length = 0.0;    // m
  double ee_mean_jerk = 0.0;      // m/s^3
  double wheelchair_mean_jerk = 0.0;
  ComfortAssessment comfort;
};

inline constexpr std::string_view kEeStream = "ee_pose";
inline constexpr std::string_view kWheelchairStream = "wheelchair";

// EE translation from ee_pose.{x,y,z}; wheelchair planar position from
// wheelchair.{x,y}. Errors: MissingChannel, TooFewSamples, InvalidTask.
TrialMetrics compute_trial_metrics(const sync::SyncedSession& session);

}  // namespace sessionforge::metrics

#endif  // SESSIONFORGE_METRICS_HPP_
