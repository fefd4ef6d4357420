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

#include <algorithm>
#include <numeric>

#include "sessionforge/curation.hpp"
#include "sessionforge/rng.hpp"
#include "sessionforge/session.hpp"
#include "test_support.hpp"

namespace sessionforge::curation {
namespace {

using testing::TempDir;

SessionManifest trial(std::string id, Task task, std::optional<bool> success) {
  SessionManifest m;
  m.session_id = std::move(id);
  m.participant_id = "P01";
  m.task = std::string(to_string(task));
  m.success = success;
  if (success && !*success) m.flags = {"ObjectDrop"};
  m.created_at = "2026-01-01T00:00:00Z";
  return m;
}

// raw / successful counts per task for a 66-trial reference dataset.
std::vector<SessionManifest> reference_dataset() {
  const std::vector<std::tuple<Task, int, int>> counts{{Task::Cleaning, 9, 4},
                                                       {Task::DoorOpening, 16, 15},
                                                       {Task::DrawerOpening, 17, 16},
                                                       {Task::Drinking, 11, 9},
                                                       {Task::Feeding, 13, 9}};
  std::vector<SessionManifest> out;
  for (const auto& [task, raw, ok] : counts) {
    for (int i = 0; i < raw; ++i) {
      out.push_back(trial(std::string(to_string(task)) + "-" + std::to_string(100 + i), task, i < ok));
    }
  }
  return out;
}

TEST(Flags, ParseAndPrint) {
  EXPECT_EQ(parse_flag("ObjectDrop").kind, ViolationKind::ObjectDrop);
  EXPECT_EQ(parse_flag("ItemFell").kind, ViolationKind::ItemFell);
  EXPECT_EQ(parse_flag("EnvironmentCollision").kind, ViolationKind::EnvironmentCollision);
  EXPECT_EQ(parse_flag("InappropriateForce").kind, ViolationKind::InappropriateForce);
  const auto other = parse_flag("Other:cup tipped");
  EXPECT_EQ(other.kind, ViolationKind::Other);
  EXPECT_EQ(other.detail, "cup tipped");
  EXPECT_EQ(to_string(other), "Other:cup tipped");
  EXPECT_SF_ERROR(parse_flag("Dropped"), "curation", "UnknownFlag");
}

TEST(Label, SuccessIffNoFlagsAndRelabelOverwrites) {
  auto m = trial("t1", Task::Feeding, std::nullopt);
  apply_label(m, {});
  EXPECT_EQ(m.success, true);
  EXPECT_TRUE(m.flags.empty());
  const std::vector<ViolationFlag> flags{parse_flag("ItemFell"), parse_flag("ObjectDrop"),
                                         parse_flag("ItemFell")};
  apply_label(m, flags);
  EXPECT_EQ(m.success, false);
  EXPECT_EQ(m.flags, (std::vector<std::string>{"ObjectDrop", "ItemFell"}));
  const auto once = m;
  apply_label(m, flags);
  EXPECT_EQ(m, once);
  apply_label(m, {});
  EXPECT_EQ(m.success, true);
  EXPECT_TRUE(m.flags.empty());
}

TEST(Label, OnDisk) {
  TempDir dir;
  save_manifest(trial("t7", Task::Drinking, std::nullopt), dir.path() / "t7" / "manifest.json");
  const std::vector<ViolationFlag> flags{parse_flag("EnvironmentCollision")};
  const auto m = label_trial(dir.path(), "t7", flags);
  EXPECT_EQ(m.success, false);
  EXPECT_EQ(load_manifest(dir.path() / "t7" / "manifest.json"), m);
  EXPECT_SF_ERROR(label_trial(dir.path(), "t8", flags), "curation", "UnknownTrial");
}

TEST(DatasetStats, ReferenceCountsGiveEightyPointThree) {
  const auto stats = dataset_stats(reference_dataset());
  EXPECT_EQ(stats.total_raw, 66u);
  EXPECT_EQ(stats.total_successful, 53u);
  EXPECT_EQ(stats.percentage_text(), "80.30");
  EXPECT_EQ(stats.per_task.at(Task::Cleaning).raw, 9u);
  EXPECT_EQ(stats.per_task.at(Task::Cleaning).successful, 4u);
  EXPECT_EQ(stats.per_task.at(Task::DrawerOpening).successful, 16u);
  const auto csv = stats_csv(stats);
  EXPECT_NE(csv.find("Total,66,53"), std::string::npos);
  EXPECT_NE(csv.find("Percentage,,80.30"), std::string::npos);
  EXPECT_NE(stats_json(stats).find("80.30"), std::string::npos);
}

TEST(DatasetStats, EdgeCases) {
  std::vector<SessionManifest> all_ok{trial("a", Task::Feeding, true), trial("b", Task::Cleaning, true)};
  const auto s = dataset_stats(all_ok);
  EXPECT_EQ(s.percentage_text(), "100.00");
  EXPECT_EQ(s.per_task.size(), 5u);
  EXPECT_EQ(s.per_task.at(Task::Drinking).raw, 0u);
  EXPECT_SF_ERROR(dataset_stats({}), "curation", "Empty");
  all_ok[0].task = "Juggling";
  EXPECT_SF_ERROR(dataset_stats(all_ok), "curation", "InvalidTask");
  std::vector<SessionManifest> third{trial("a", Task::Feeding, true), trial("b", Task::Feeding, false),
                                     trial("c", Task::Feeding, false)};
  EXPECT_EQ(dataset_stats(third).percentage_text(), "33.33");
  std::vector<SessionManifest> two_thirds{trial("a", Task::Feeding, true), trial("b", Task::Feeding, true),
                                          trial("c", Task::Feeding, false)};
  EXPECT_EQ(dataset_stats(two_thirds).percentage_text(), "66.67");
}

TEST(DatasetStats, PermutationInvariantAndMatchesRecount) {
  SplitMix64 rng(31);
  for (int c = 0; c < 100; ++c) {
    std::vector<SessionManifest> ms;
    const int n = 1 + static_cast<int>(rng.uniform() * 80);
    for (int i = 0; i < n; ++i) {
      const Task t = kAllTasks[static_cast<std::size_t>(rng.uniform() * 5)];
      ms.push_back(trial("t" + std::to_string(i), t, rng.uniform() < 0.7));
    }
    const auto stats = dataset_stats(ms);
    std::size_t ok = 0;
    for (const auto& m : ms) ok += *m.success ? 1 : 0;
    ASSERT_EQ(stats.total_raw, ms.size());
    ASSERT_EQ(stats.total_successful, ok);
    for (Task t : kAllTasks) {
      const auto raw = std::count_if(ms.begin(), ms.end(), [&](const auto& m) { return m.task == to_string(t); });
      const auto good = std::count_if(ms.begin(), ms.end(),
                                      [&](const auto& m) { return m.task == to_string(t) && *m.success; });
      ASSERT_EQ(stats.per_task.at(t).raw, static_cast<std::size_t>(raw));
      ASSERT_EQ(stats.per_task.at(t).successful, static_cast<std::size_t>(good));
      ASSERT_LE(stats.per_task.at(t).successful, stats.per_task.at(t).raw);
    }
    const long long want = (20000LL * ok + ms.size()) / (2 * ms.size());
    ASSERT_EQ(stats.percentage_hundredths, want);
    std::reverse(ms.begin(), ms.end());
    for (std::size_t i = 1; i < ms.size(); i += 2) std::swap(ms[i - 1], ms[i]);
    const auto again = dataset_stats(ms);
    ASSERT_EQ(again.percentage_hundredths, stats.percentage_hundredths);
    ASSERT_EQ(stats_csv(again), stats_csv(stats));
  }
}

TEST(Filter, SuccessfulOnlyInTaskOrder) {
  const auto result = filter_successful(reference_dataset());
  EXPECT_EQ(result.trials.size(), 53u);
  EXPECT_EQ(result.trials.front(), "Cleaning-100");
  EXPECT_EQ(result.trials.back(), "Feeding-108");
  EXPECT_TRUE(result.warnings.empty());

  std::vector<SessionManifest> failed{trial("a", Task::Feeding, false), trial("b", Task::Drinking, false)};
  EXPECT_TRUE(filter_successful(failed).trials.empty());

  std::vector<SessionManifest> unlabeled{trial("a", Task::Feeding, true), trial("b", Task::Drinking, std::nullopt)};
  EXPECT_SF_ERROR(filter_successful(unlabeled), "curation", "UnlabeledTrial");
  const auto lenient = filter_successful(unlabeled, false);
  EXPECT_EQ(lenient.trials, std::vector<std::string>{"a"});
  EXPECT_EQ(lenient.warnings.size(), 1u);
}

TEST(Filter, FromDisk) {
  TempDir dir;
  for (const auto& m : reference_dataset()) save_manifest(m, dir.path() / m.session_id / "manifest.json");
  EXPECT_EQ(load_manifests(dir.path()).size(), 66u);
  EXPECT_EQ(filter_successful(dir.path()).trials, filter_successful(reference_dataset()).trials);
}

TEST(Survey, MedianAndTopBox) {
  const auto a = summarize_question("q1", std::vector<int>{5, 4, 4, 5, 2});
  EXPECT_EQ(a.median, 4.0);
  EXPECT_EQ(a.top_box_percent, 80.0);
  EXPECT_EQ(a.n, 5u);
  const auto b = summarize_question("q2", std::vector<int>{3, 3, 3, 3, 3});
  EXPECT_EQ(b.median, 3.0);
  EXPECT_EQ(b.top_box_percent, 0.0);
  const auto c = summarize_question("q3", std::vector<int>{5, 4, 4, 3, 3});
  EXPECT_EQ(c.median, 4.0);
  EXPECT_EQ(c.top_box_percent, 60.0);
  EXPECT_EQ(summarize_question("q4", std::vector<int>{1, 2, 4, 5}).median, 3.0);
  EXPECT_SF_ERROR(summarize_question("q", {}), "curation", "EmptyQuestion");
  EXPECT_SF_ERROR(summarize_question("q", std::vector<int>{3, 6}), "curation", "OutOfRangeRating");
  EXPECT_SF_ERROR(summarize_question("q", std::vector<int>{0}), "curation", "OutOfRangeRating");
}

TEST(Survey, CsvParsing) {
  const auto r = parse_survey_csv(
      "question_id,participant_id,rating\nq2,P1,3\nq1,P1,5\nq1,P2,4\nq1,P3,4\nq1,P4,5\nq1,P5,2\n");
  ASSERT_EQ(r.size(), 2u);
  const auto s = survey_stats(r);
  ASSERT_EQ(s.questions.size(), 2u);
  EXPECT_EQ(s.questions[0].question, "q1");
  EXPECT_EQ(s.questions[0].top_box_percent, 80.0);
  EXPECT_NE(survey_json(s).find("\"q2\""), std::string::npos);
  EXPECT_SF_ERROR(parse_survey_csv("question,rating\nq1,3\n"), "curation", "MalformedSurvey");
  EXPECT_SF_ERROR(parse_survey_csv("question_id,participant_id,rating\nq1,P1,x\n"), "curation",
                  "MalformedSurvey");
}

}  // namespace
}  // namespace sessionforge::curation
