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

#ifndef SESSIONFORGE_CURATION_HPP_
#define SESSIONFORGE_CURATION_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/session.hpp"
#include "sessionforge/task.hpp"

namespace sessionforge::curation {

enum class ViolationKind { ObjectDrop, ItemFell, EnvironmentCollision, InappropriateForce, Other };

// A trial-failure flag. `detail` carries the free text of Other.
struct ViolationFlag {
  ViolationKind kind = ViolationKind::Other;
  std::string detail;

  bool operator==(const ViolationFlag&) const = default;
  auto operator<=>(const ViolationFlag&) const = default;
};

// "ObjectDrop", ..., "Other:<text>". Errors: UnknownFlag.
ViolationFlag parse_flag(std::string_view text);
std::string to_string(const ViolationFlag& flag);

// Errors: UnknownTrial (no <root>/<trial_id>/manifest.json).
SessionManifest label_trial(const std::filesystem::path& dataset_root, const std::string& trial_id,
                            std::span<const ViolationFlag> flags);

// Label in memory: success = flags empty; flags stored (sorted, deduplicated).
void apply_label(SessionManifest& manifest, std::span<const ViolationFlag> flags);

struct TaskCounts {
  std::size_t raw = 0;
  std::size_t successful = 0;
};

struct DatasetStats {
  std::map<Task, TaskCounts> per_task;  // every task present, zero when absent
  std::size_t total_raw = 0;
  std::size_t total_successful = 0;
  // 100 * successful / raw in hundredths of a percent, rounded half up.
  long long percentage_hundredths = 0;

  std::string percentage_text() const;  // e.g. "80.30"
  double percentage() const { return static_cast<double>(percentage_hundredths) / 100.0; }
};

// Errors: Empty, InvalidTask.
DatasetStats dataset_stats(std::span<const SessionManifest> manifests);

std::string stats_json(const DatasetStats& stats);
std::string stats_csv(const DatasetStats& stats);

// Every <root>/<dir>/manifest.json, ordered by directory name.
std::vector<SessionManifest> load_manifests(const std::filesystem::path& dataset_root);

struct FilterResult {
  std::vector<std::string> trials;  // ordered by (task, trial_id)
  std::vector<std::string> warnings;
};

// Successful trials only. Strict: unlabeled trials raise UnlabeledTrial;
// lenient: they are excluded with a warning.
FilterResult filter_successful(std::span<const SessionManifest> manifests, bool strict = true);
FilterResult filter_successful(const std::filesystem::path& dataset_root, bool strict = true);

struct QuestionSummary {
  std::string question;
  std::size_t n = 0;
  double median = 0.0;
  double top_box_percent = 0.0;  // share of ratings 4 or 5
};

// Errors: EmptyQuestion, OutOfRangeRating.
QuestionSummary summarize_question(const std::string& question, std::span<const int> ratings);

struct SurveySummary {
  std::vector<QuestionSummary> questions;  // in question_id order
};

SurveySummary survey_stats(const std::map<std::string, std::vector<int>>& responses);

// CSV with header question_id,participant_id,rating. Errors: MalformedSurvey.
std::map<std::string, std::vector<int>> parse_survey_csv(std::string_view text);

std::string survey_json(const SurveySummary& summary);

}  // namespace sessionforge::curation

#endif  // SESSIONFORGE_CURATION_HPP_
