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

#include "sessionforge/metrics.hpp"

#include <cmath>

#include "sessionforge/error.hpp"

namespace sessionforge::metrics {

namespace {

[[noreturn]] void fail(const char* code, const std::string& detail) {
  throw Error(module_name::kMetrics, code, detail);
}

}  // namespace

std::vector<double> jerk_series(std::span<const Point> positions, double dt) {
  if (positions.size() < 4) fail("TooFewSamples", "jerk needs at least 4 samples");
  if (!(dt > 0.0)) fail("InvalidStep", "dt must be > 0");
  const double inv = 1.0 / (dt * dt * dt);
  std::vector<double> out(positions.size() - 3);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sq = 0.0;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      const double d = positions[k + 3][axis] - 3.0 * positions[k + 2][axis] +
                       3.0 * positions[k + 1][axis] - positions[k][axis];
      sq += d * d;
    }
    out[k] = std::sqrt(sq) * inv;
  }
  return out;
}

double trial_mean_jerk(std::span<const double> jerk) {
  if (jerk.empty()) fail("Empty", "no jerk samples");
  double sum = 0.0;
  for (double j : jerk) sum += j;
  return sum / static_cast<double>(jerk.size());
}

double path_length(std::span<const Point> positions) {
  if (positions.size() < 2) fail("TooFewSamples", "path length needs at least 2 samples");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
    const double dx = positions[k + 1][0] - positions[k][0];
    const double dy = positions[k + 1][1] - positions[k][1];
    const double dz = positions[k + 1][2] - positions[k][2];
    total += std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return total;
}

TaskAggregate task_aggregate(std::span<const double> values) {
  if (values.empty()) fail("Empty", "no trials to aggregate");
  TaskAggregate agg;
  agg.n_trial = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

std::string_view to_string(ComfortBand band) {
  switch (band) {
    case ComfortBand::Below: return "below";
    case ComfortBand::Within: return "within";
    case ComfortBand::Above: return "above";
  }
  return "unknown";
}

ComfortAssessment comfort_check(double wheelchair_mean_jerk) {
  if (!(wheelchair_mean_jerk >= 0.0)) fail("InvalidValue", "mean jerk must be >= 0");
  ComfortAssessment a;
  if (wheelchair_mean_jerk < kComfortLow) {
    a.wheelchair_band = ComfortBand::Below;
  } else if (wheelchair_mean_jerk <= kComfortHigh) {
    a.wheelchair_band = ComfortBand::Within;
  } else {
    a.wheelchair_band = ComfortBand::Above;
  }
  return a;
}

namespace {

std::vector<Point> positions_of(const sync::SyncedSession& session, std::string_view stream,
                                std::initializer_list<std::string_view> axes) {
  auto it = session.numeric.find(std::string(stream));
  if (it == session.numeric.end()) {
    fail("MissingChannel", "stream '" + std::string(stream) + "' not present");
  }
  const TimedSeries& s = it->second;
  std::vector<std::size_t> idx;
  for (auto axis : axes) {
    auto c = s.channel_index(axis);
    if (!c) {
      fail("MissingChannel", "channel '" + std::string(stream) + "." + std::string(axis) + "' not present");
    }
    idx.push_back(*c);
  }
  std::vector<Point> out(s.size(), Point{0.0, 0.0, 0.0});
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t a = 0; a < idx.size(); ++a) out[k][a] = s.value(k, idx[a]);
  }
  return out;
}

}  // namespace

TrialMetrics compute_trial_metrics(const sync::SyncedSession& session) {
  TrialMetrics m;
  m.trial_id = session.manifest.session_id;
  auto task = parse_task(session.manifest.task);
  if (!task) fail("InvalidTask", "unknown task '" + session.manifest.task + "'");
  m.task = *task;
  const auto& grid = session.grid.timestamps;
  if (grid.size() < 4) fail("TooFewSamples", "grid shorter than the jerk stencil");
  m.duration = grid.back() - grid.front();

  const auto ee = positions_of(session, kEeStream, {"x", "y", "z"});
  const auto chair = positions_of(session, kWheelchairStream, {"x", "y"});
  const double dt = session.grid.period();
  m.ee_path_length = path_length(ee);
  m.ee_mean_jerk = trial_mean_jerk(jerk_series(ee, dt));
  m.wheelchair_mean_jerk = trial_mean_jerk(jerk_series(chair, dt));
  m.comfort = comfort_check(m.wheelchair_mean_jerk);
  return m;
}

}  // namespace sessionforge::metrics
