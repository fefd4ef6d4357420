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

#include "sessionforge/curation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "sessionforge/error.hpp"
#include "text_io.hpp"

namespace sessionforge::curation {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const char* code, const std::string& detail) {
  throw Error(module_name::kCuration, code, detail);
}

constexpr std::string_view kOtherPrefix = "Other:";

}  // namespace

ViolationFlag parse_flag(std::string_view text) {
  if (text == "ObjectDrop") return {ViolationKind::ObjectDrop, {}};
  if (text == "ItemFell") return {ViolationKind::ItemFell, {}};
  if (text == "EnvironmentCollision") return {ViolationKind::EnvironmentCollision, {}};
  if (text == "InappropriateForce") return {ViolationKind::InappropriateForce, {}};
  if (text.rfind(kOtherPrefix, 0) == 0) {
    return {ViolationKind::Other, std::string(text.substr(kOtherPrefix.size()))};
  }
  fail("UnknownFlag", "unknown violation flag '" + std::string(text) + "'");
}

std::string to_string(const ViolationFlag& flag) {
  switch (flag.kind) {
    case ViolationKind::ObjectDrop: return "ObjectDrop";
    case ViolationKind::ItemFell: return "ItemFell";
    case ViolationKind::EnvironmentCollision: return "EnvironmentCollision";
    case ViolationKind::InappropriateForce: return "InappropriateForce";
    case ViolationKind::Other: return std::string(kOtherPrefix) + flag.detail;
  }
  return "Other:";
}

void apply_label(SessionManifest& manifest, std::span<const ViolationFlag> flags) {
  std::set<ViolationFlag> unique(flags.begin(), flags.end());
  manifest.flags.clear();
  for (const auto& f : unique) manifest.flags.push_back(to_string(f));
  manifest.success = unique.empty();
}

SessionManifest label_trial(const fs::path& dataset_root, const std::string& trial_id,
                            std::span<const ViolationFlag> flags) {
  const fs::path manifest_file = dataset_root / trial_id / "manifest.json";
  if (trial_id.empty() || !fs::exists(manifest_file)) {
    fail("UnknownTrial", "no trial '" + trial_id + "' under " + dataset_root.string());
  }
  SessionManifest m = load_manifest(manifest_file);
  apply_label(m, flags);
  save_manifest(m, manifest_file);
  return m;
}

std::string DatasetStats::percentage_text() const {
  const long long whole = percentage_hundredths / 100;
  const long long frac = percentage_hundredths % 100;
  return std::to_string(whole) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
}

DatasetStats dataset_stats(std::span<const SessionManifest> manifests) {
  if (manifests.empty()) fail("Empty", "no manifests");
  DatasetStats s;
  for (Task t : kAllTasks) s.per_task[t] = {};
  for (const auto& m : manifests) {
    auto task = parse_task(m.task);
    if (!task) fail("InvalidTask", m.session_id + ": unknown task '" + m.task + "'");
    auto& c = s.per_task[*task];
    ++c.raw;
    if (m.success.value_or(false)) ++c.successful;
  }
  for (const auto& [_, c] : s.per_task) {
    s.total_raw += c.raw;
    s.total_successful += c.successful;
  }
  // round_half_up(10000 * s / r) in integers.
  const auto num = static_cast<long long>(s.total_successful);
  const auto den = static_cast<long long>(s.total_raw);
  s.percentage_hundredths = (20000 * num + den) / (2 * den);
  return s;
}

std::string stats_json(const DatasetStats& stats) {
  json tasks = json::array();
  for (const auto& [task, c] : stats.per_task) {
    tasks.push_back({{"task", std::string(to_string(task))}, {"raw", c.raw}, {"successful", c.successful}});
  }
  json j;
  j["tasks"] = std::move(tasks);
  j["total_raw"] = stats.total_raw;
  j["total_successful"] = stats.total_successful;
  j["success_percentage"] = stats.percentage_text();
  return j.dump(2) + "\n";
}

std::string stats_csv(const DatasetStats& stats) {
  std::string out = "task,raw,successful\n";
  for (const auto& [task, c] : stats.per_task) {
    out += std::string(to_string(task)) + "," + std::to_string(c.raw) + "," +
           std::to_string(c.successful) + "\n";
  }
  out += "Total," + std::to_string(stats.total_raw) + "," + std::to_string(stats.total_successful) + "\n";
  out += "Percentage,," + stats.percentage_text() + "\n";
  return out;
}

std::vector<SessionManifest> load_manifests(const fs::path& dataset_root) {
  if (!fs::is_directory(dataset_root)) {
    throw Error(module_name::kCuration, "MissingFile", dataset_root.string() + " is not a directory");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(dataset_root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<SessionManifest> out;
  for (const auto& d : dirs) out.push_back(load_manifest(d / "manifest.json"));
  return out;
}

FilterResult filter_successful(std::span<const SessionManifest> manifests, bool strict) {
  FilterResult r;
  std::vector<std::pair<std::string, std::string>> keyed;
  for (const auto& m : manifests) {
    if (!m.success) {
      if (strict) fail("UnlabeledTrial", "trial '" + m.session_id + "' has no success label");
      r.warnings.push_back("trial '" + m.session_id + "' unlabeled; excluded");
      continue;
    }
    if (*m.success) keyed.emplace_back(m.task, m.session_id);
  }
  // Order by task in taxonomy order, then trial id.
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    auto ta = parse_task(a.first);
    auto tb = parse_task(b.first);
    if (ta != tb) return ta < tb;
    return a.second < b.second;
  });
  for (auto& [_, id] : keyed) r.trials.push_back(std::move(id));
  return r;
}

FilterResult filter_successful(const fs::path& dataset_root, bool strict) {
  const auto manifests = load_manifests(dataset_root);
  return filter_successful(manifests, strict);
}

QuestionSummary summarize_question(const std::string& question, std::span<const int> ratings) {
  if (ratings.empty()) fail("EmptyQuestion", "question '" + question + "' has no ratings");
  std::vector<int> sorted(ratings.begin(), ratings.end());
  std::size_t top = 0;
  for (int r : sorted) {
    if (r < 1 || r > 5) {
      fail("OutOfRangeRating", "question '" + question + "': rating " + std::to_string(r));
    }
    if (r >= 4) ++top;
  }
  std::sort(sorted.begin(), sorted.end());
  QuestionSummary q;
  q.question = question;
  q.n = sorted.size();
  const std::size_t mid = sorted.size() / 2;
  q.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  q.top_box_percent = 100.0 * static_cast<double>(top) / static_cast<double>(sorted.size());
  return q;
}

SurveySummary survey_stats(const std::map<std::string, std::vector<int>>& responses) {
  SurveySummary s;
  for (const auto& [question, ratings] : responses) {
    s.questions.push_back(summarize_question(question, ratings));
  }
  return s;
}

std::map<std::string, std::vector<int>> parse_survey_csv(std::string_view text) {
  std::map<std::string, std::vector<int>> out;
  bool header = true;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = detail::split(line, ',');
    if (header) {
      header = false;
      if (cells.size() != 3 || cells[0] != "question_id" || cells[1] != "participant_id" ||
          cells[2] != "rating") {
        fail("MalformedSurvey", "expected header question_id,participant_id,rating");
      }
      continue;
    }
    if (cells.size() != 3) fail("MalformedSurvey", "line " + std::to_string(line_no) + ": expected 3 columns");
    auto rating = detail::parse_double(cells[2]);
    if (!rating || *rating != std::floor(*rating)) {
      fail("MalformedSurvey", "line " + std::to_string(line_no) + ": rating must be an integer");
    }
    out[std::string(cells[0])].push_back(static_cast<int>(*rating));
  }
  return out;
}

std::string survey_json(const SurveySummary& summary) {
  json qs = json::array();
  for (const auto& q : summary.questions) {
    qs.push_back({{"question", q.question},
                  {"n", q.n},
                  {"median", q.median},
                  {"top_box_percent", q.top_box_percent}});
  }
  json j;
  j["questions"] = std::move(qs);
  return j.dump(2) + "\n";
}

}  // namespace sessionforge::curation
