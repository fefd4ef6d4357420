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

#ifndef SESSIONFORGE_TOOLS_REPORT_HPP_
#define SESSIONFORGE_TOOLS_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sessionforge/curation.hpp"
#include "sessionforge/dialogue.hpp"
#include "sessionforge/filter.hpp"
#include "sessionforge/metrics.hpp"
#include "sessionforge/sync.hpp"

namespace sessionforge::cli {

struct TrialResult {
  metrics::TrialMetrics metrics;
  std::vector<std::string> warnings;
};

struct ProcessOptions {
  sync::SyncOptions sync;
  dsp::DenoisePolicy policy = dsp::DenoisePolicy::standard();
  bool prefilter = true;
};

// Raw session -> prefilter -> sync. Errors propagate from the stages.
sync::SyncedSession sync_raw(const RawSession& raw, const ProcessOptions& options);

// Raw session directory -> sync -> denoise -> metrics; the denoised synced
// container is written to `synced_dir` when given.
TrialResult process_trial(const std::filesystem::path& raw_dir, const ProcessOptions& options,
                          const std::optional<std::filesystem::path>& synced_dir);

// Runs `count` jobs on up to `jobs` threads; results keep index order.
// The first failure (lowest index) is rethrown after all jobs finish.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn);

// Per-trial and per-task tables (task, n, mean, sd) for duration, EE path
// length, EE mean jerk and wheelchair mean jerk.
std::string metrics_report_json(const std::vector<metrics::TrialMetrics>& trials);

struct ConsolidatedReport {
  std::optional<curation::DatasetStats> dataset;
  std::vector<metrics::TrialMetrics> trials;  // ordered by (task, trial_id)
  std::vector<dialogue::AnnotatedDialogue> dialogues;
  std::vector<std::string> warnings;
};

std::string report_json(const ConsolidatedReport& report);
// File name -> CSV text, one table per report section.
std::map<std::string, std::string> report_csv(const ConsolidatedReport& report);

void write_report(const ConsolidatedReport& report, const std::filesystem::path& out_dir,
                  bool json, bool csv);

// Sub-directories of `root` holding a manifest.json, by name.
std::vector<std::filesystem::path> session_dirs(const std::filesystem::path& root);
// Sub-directories of `root` holding a synced.json, by name.
std::vector<std::filesystem::path> synced_dirs(const std::filesystem::path& root);

std::string format_number(double v);

}  // namespace sessionforge::cli

#include "parallel.inl"

#endif  // SESSIONFORGE_TOOLS_REPORT_HPP_
