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

#include "sessionforge/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sessionforge/error.hpp"

namespace sessionforge::sync {

namespace {

// Float slack when comparing grid times against series/window bounds.
constexpr double kTimeSlack = 1e-9;

[[noreturn]] void fail(const char* code, const std::string& detail) {
  throw Error(module_name::kSync, code, detail);
}

}  // namespace

TimeSpan span_of(const TimedSeries& series) {
  if (series.empty()) fail("EmptySeries", "series has no samples");
  return {series.timestamps.front(), series.timestamps.back()};
}

TimeSpan span_of(const FrameTimestampLog& log) {
  if (log.timestamps.empty()) fail("EmptyFrameLog", "frame log '" + log.stream + "' is empty");
  return {log.timestamps.front(), log.timestamps.back()};
}

OverlapWindow compute_overlap(std::span<const TimeSpan> spans) {
  if (spans.size() < 2) fail("NoOverlap", "need at least two streams");
  OverlapWindow w{-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  for (const auto& s : spans) {
    w.start = std::max(w.start, s.first);
    w.end = std::min(w.end, s.last);
  }
  if (!(w.start < w.end)) {
    fail("NoOverlap", "latest start " + std::to_string(w.start) + " >= earliest end " +
                          std::to_string(w.end));
  }
  return w;
}

ReferenceGrid build_reference_grid(const OverlapWindow& window, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) fail("InvalidRate", "grid rate must be > 0");
  if (!(window.start <= window.end)) fail("NoOverlap", "invalid window");
  const double steps = std::floor((window.end - window.start) * rate + kTimeSlack);
  const auto count = static_cast<std::size_t>(steps) + 1;
  ReferenceGrid grid;
  grid.rate = rate;
  grid.timestamps.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid.timestamps[k] = window.start + static_cast<double>(k) / rate;
  }
  return grid;
}

double FrameSelection::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  return static_cast<double>(std::count(accepted.begin(), accepted.end(), true)) /
         static_cast<double>(accepted.size());
}

FrameSelection match_frames(const FrameTimestampLog& frames, const ReferenceGrid& grid,
                            double tau) {
  if (frames.timestamps.empty()) {
    fail("EmptyFrameLog", "frame log '" + frames.stream + "' is empty");
  }
  if (!(tau >= 0.0)) fail("InvalidTolerance", "tau must be >= 0");
  if (auto v = check_timestamps(frames.timestamps)) {
    fail("InvariantViolation", *v + " (stream " + frames.stream + ")");
  }
  const auto& t = frames.timestamps;
  FrameSelection sel;
  sel.stream = frames.stream;
  sel.selected_indices.resize(grid.size());
  sel.accepted.resize(grid.size());

  // Grid times increase, so the nearest frame index never moves backwards.
  // Strict '<' keeps the earlier frame on ties.
  std::size_t nearest = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double tk = grid.timestamps[k];
    while (nearest + 1 < t.size() && std::abs(t[nearest + 1] - tk) < std::abs(t[nearest] - tk)) {
      ++nearest;
    }
    const bool ok = std::abs(t[nearest] - tk) <= tau;
    sel.accepted[k] = ok;
    sel.selected_indices[k] = (ok || k == 0) ? nearest : sel.selected_indices[k - 1];
  }
  return sel;
}

TimedSeries interpolate_numeric(const TimedSeries& series, const ReferenceGrid& grid,
                                double max_gap) {
  TimedSeries out(series.channels);
  if (grid.size() == 0) return out;
  if (series.size() < 2) fail("GridOutsideSeries", "series needs at least two samples");
  const auto& ts = series.timestamps;
  if (ts.front() > grid.timestamps.front() + kTimeSlack ||
      ts.back() < grid.timestamps.back() - kTimeSlack) {
    fail("GridOutsideSeries", "grid [" + std::to_string(grid.timestamps.front()) + ", " +
                                  std::to_string(grid.timestamps.back()) +
                                  "] not covered by series [" + std::to_string(ts.front()) +
                                  ", " + std::to_string(ts.back()) + "]");
  }
  out.timestamps = grid.timestamps;
  out.values.assign(grid.size() * series.channel_count(), 0.0);

  std::vector<std::size_t> valid;
  for (std::size_t c = 0; c < series.channel_count(); ++c) {
    valid.clear();
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!std::isnan(series.value(i, c))) valid.push_back(i);
    }
    if (valid.empty()) {
      fail("UnbridgeableGap", "channel '" + series.channels[c].name + "' has no valid samples");
    }
    std::size_t j = 0;  // valid[j] is the last valid sample at or before t
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = std::clamp(grid.timestamps[k], ts.front(), ts.back());
      while (j + 1 < valid.size() && ts[valid[j + 1]] <= t) ++j;
      const std::size_t lo = valid[j];
      double v;
      if (ts[lo] == t) {
        v = series.value(lo, c);
      } else if (ts[lo] > t || j + 1 >= valid.size()) {
        fail("UnbridgeableGap", "channel '" + series.channels[c].name +
                                    "' has no valid sample on both sides of t=" +
                                    std::to_string(t));
      } else {
        const std::size_t hi = valid[j + 1];
        if (hi != lo + 1 && ts[hi] - ts[lo] > max_gap) {
          fail("UnbridgeableGap", "channel '" + series.channels[c].name + "' gap of " +
                                      std::to_string(ts[hi] - ts[lo]) + " s exceeds max gap");
        }
        const double v0 = series.value(lo, c);
        const double v1 = series.value(hi, c);
        v = v0 + (v1 - v0) * ((t - ts[lo]) / (ts[hi] - ts[lo]));
      }
      out.value(k, c) = v;
    }
  }
  return out;
}

double reference_rate(const RawSession& session) {
  double rate = std::numeric_limits<double>::infinity();
  for (const auto& s : session.manifest.streams) {
    if (s.kind == StreamKind::VideoFrames) rate = std::min(rate, s.nominal_rate);
  }
  if (!std::isfinite(rate)) fail("MissingStream", "session has no video stream");
  return rate;
}

namespace {

void renormalise_quaternions(TimedSeries& series) {
  const auto qx = series.channel_index("qx");
  const auto qy = series.channel_index("qy");
  const auto qz = series.channel_index("qz");
  const auto qw = series.channel_index("qw");
  if (!qx || !qy || !qz || !qw) return;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double& x = series.value(i, *qx);
    double& y = series.value(i, *qy);
    double& z = series.value(i, *qz);
    double& w = series.value(i, *qw);
    const double n = std::sqrt(x * x + y * y + z * z + w * w);
    if (n > 0.0) {
      x /= n;
      y /= n;
      z /= n;
      w /= n;
    }
  }
}

}  // namespace

SyncedSession sync_session(const RawSession& session, const SyncOptions& options) {
  std::vector<const StreamDescriptor*> video;
  std::vector<const StreamDescriptor*> numeric;
  for (const auto& s : session.manifest.streams) {
    if (s.kind == StreamKind::VideoFrames) video.push_back(&s);
    if (s.kind == StreamKind::Numeric) numeric.push_back(&s);
  }
  if (video.empty()) fail("MissingStream", "session has no video stream");
  if (numeric.empty()) fail("MissingStream", "session has no numeric stream");

  std::vector<TimeSpan> spans;
  for (const auto* d : video) spans.push_back(span_of(session.video.at(d->name)));
  for (const auto* d : numeric) {
    const auto& s = session.numeric.at(d->name);
    if (s.size() < 2) fail("TooFewSamples", "numeric stream '" + d->name + "' has < 2 samples");
    spans.push_back(span_of(s));
  }

  SyncedSession out;
  out.manifest = session.manifest;
  out.dialogue = session.dialogue;
  out.window = compute_overlap(spans);
  out.grid = build_reference_grid(out.window, reference_rate(session));
  out.tau = options.tau.value_or(0.5 * out.grid.period());
  if (!(out.tau >= 0.0)) fail("InvalidTolerance", "tau must be >= 0");

  for (const auto* d : video) {
    out.selections.push_back(match_frames(session.video.at(d->name), out.grid, out.tau));
  }
  for (const auto* d : numeric) {
    auto resampled = interpolate_numeric(session.numeric.at(d->name), out.grid, options.max_gap);
    renormalise_quaternions(resampled);
    out.numeric.emplace(d->name, std::move(resampled));
  }
  if (out.dialogue) {
    if (auto v = dialogue::check_frame_refs(*out.dialogue, out.grid.size())) {
      out.warnings.push_back("dialogue: " + *v);
    }
  }
  return out;
}

std::vector<StreamReport> sync_report(const SyncedSession& synced) {
  std::vector<StreamReport> out;
  for (const auto& sel : synced.selections) {
    StreamReport r;
    r.stream = sel.stream;
    r.grid_points = sel.accepted.size();
    r.accepted = static_cast<std::size_t>(std::count(sel.accepted.begin(), sel.accepted.end(), true));
    r.acceptance_rate = sel.acceptance_rate();
    out.push_back(r);
  }
  return out;
}

}  // namespace sessionforge::sync
