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

#ifndef SESSIONFORGE_SYNC_HPP_
#define SESSIONFORGE_SYNC_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sessionforge/session.hpp"

namespace sessionforge::sync {

struct TimeSpan {
  double first = 0.0;
  double last = 0.0;
  bool operator==(const TimeSpan&) const = default;
};

TimeSpan span_of(const TimedSeries& series);
TimeSpan span_of(const FrameTimestampLog& log);

struct OverlapWindow {
  double start = 0.0;
  double end = 0.0;
  bool operator==(const OverlapWindow&) const = default;
};

// Latest start and earliest end over all spans. Errors: NoOverlap (also
// for fewer than two spans).
OverlapWindow compute_overlap(std::span<const TimeSpan> spans);

struct ReferenceGrid {
  std::vector<double> timestamps;
  double rate = 0.0;

  std::size_t size() const { return timestamps.size(); }
  double period() const { return 1.0 / rate; }
  bool operator==(const ReferenceGrid&) const = default;
};

// t_k = start + k / rate for every t_k within the window (up to 1e-9 s of
// float slack), K = floor((end - start) * rate) + 1.
ReferenceGrid build_reference_grid(const OverlapWindow& window, double rate);

struct FrameSelection {
  std::string stream;
  std::vector<std::size_t> selected_indices;  // 0-based into the frame log
  std::vector<bool> accepted;

  double acceptance_rate() const;
  bool operator==(const FrameSelection&) const = default;
};

// Tolerance rule: nearest frame (ties to the earlier one) is taken when it
// lies within tau of the grid time; otherwise the previous selection is
// repeated. A failed test at the first grid step keeps the nearest frame and
// marks it unaccepted. Errors: EmptyFrameLog.
FrameSelection match_frames(const FrameTimestampLog& frames, const ReferenceGrid& grid,
                            double tau);

inline constexpr double kDefaultMaxGap = 0.5;

// Linear interpolation of every channel onto the grid. NaN gaps are bridged
// by the neighbouring valid samples when the gap is at most `max_gap`
// seconds. Errors: GridOutsideSeries, UnbridgeableGap.
TimedSeries interpolate_numeric(const TimedSeries& series, const ReferenceGrid& grid,
                                double max_gap = kDefaultMaxGap);

struct SyncOptions {
  std::optional<double> tau;  // default: half the grid period
  double max_gap = kDefaultMaxGap;
};

struct SyncedSession {
  SessionManifest manifest;
  ReferenceGrid grid;
  OverlapWindow window;
  double tau = 0.0;
  std::vector<FrameSelection> selections;
  std::map<std::string, TimedSeries> numeric;  // resampled onto grid
  std::optional<dialogue::AnnotatedDialogue> dialogue;
  std::vector<std::string> prefiltered;  // filtered at native rate before sync
  bool denoised = false;
  std::vector<std::string> warnings;

  bool operator==(const SyncedSession&) const = default;
};

// Lowest nominal rate among the session's video streams.
// Errors: MissingStream when the session has no video stream.
double reference_rate(const RawSession& session);

// Overlap over video + numeric streams (audio excluded), grid at the lowest
// video rate, a FrameSelection per video stream, every numeric stream
// interpolated. Quaternion channel groups (qx, qy, qz, qw) are renormalised
// after interpolation.
SyncedSession sync_session(const RawSession& session, const SyncOptions& options = {});

struct StreamReport {
  std::string stream;
  std::size_t grid_points = 0;
  std::size_t accepted = 0;
  double acceptance_rate = 0.0;
};

std::vector<StreamReport> sync_report(const SyncedSession& synced);
std::string sync_report_json(const SyncedSession& synced);

// Synced container:
//   synced.json, grid.csv, selections/<stream>.csv, streams/<name>.csv,
//   dialogue.jsonl
void save_synced(const SyncedSession& synced, const std::filesystem::path& root);
SyncedSession load_synced(const std::filesystem::path& root);
bool is_synced_dir(const std::filesystem::path& root);

}  // namespace sessionforge::sync

#endif  // SESSIONFORGE_SYNC_HPP_
