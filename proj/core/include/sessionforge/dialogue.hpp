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

#ifndef SESSIONFORGE_DIALOGUE_HPP_
#define SESSIONFORGE_DIALOGUE_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/task.hpp"

namespace sessionforge::dialogue {

enum class Speaker { User, Robot };

// One transcribed turn. `text` is kept verbatim, disfluencies included.
struct Utterance {
  Speaker speaker = Speaker::User;
  std::string text;
  double t_start = 0.0;
  double t_end = 0.0;
  std::string trial_id;
  int turn_index = 0;

  bool operator==(const Utterance&) const = default;
};

enum class Clarity { Specific, Ambiguous };

enum class AmbiguityType {
  Spatial,
  Referential,
  IntentPragmatic,
  TemporalIncremental,
  OutOfScope,
};

inline constexpr std::array<AmbiguityType, 5> kAllAmbiguityTypes = {
    AmbiguityType::Spatial, AmbiguityType::Referential,
    AmbiguityType::IntentPragmatic, AmbiguityType::TemporalIncremental,
    AmbiguityType::OutOfScope};

// `type` is present iff clarity == Ambiguous.
struct AmbiguityLabel {
  Clarity clarity = Clarity::Specific;
  std::optional<AmbiguityType> type;

  bool operator==(const AmbiguityLabel&) const = default;
};

struct AnnotatedDialogue {
  std::string trial_id;
  Task task = Task::Feeding;
  std::vector<Utterance> turns;
  std::map<int, AmbiguityLabel> labels;  // user turns only
  std::map<int, long> frame_refs;        // turn_index -> reference grid index

  bool operator==(const AnnotatedDialogue&) const = default;
};

std::string_view to_string(Speaker speaker);
std::string_view to_string(Clarity clarity);
std::string_view to_string(AmbiguityType type);
std::optional<Speaker> parse_speaker(std::string_view s);
std::optional<Clarity> parse_clarity(std::string_view s);
std::optional<AmbiguityType> parse_ambiguity_type(std::string_view s);

// Throws LabelSchemaViolation when the type/clarity pairing is invalid.
void check_label(const AmbiguityLabel& label);

// Structural checks: contiguous unique turn indices, t_start < t_end,
// labels only on user turns, label schema. Returns the first violation.
std::optional<std::string> check_dialogue(const AnnotatedDialogue& d);

// Frame references must index into a grid of `grid_size` steps.
std::optional<std::string> check_frame_refs(const AnnotatedDialogue& d,
                                            std::size_t grid_size);

// Returns a new dialogue with the label stored (replacing any previous one).
// Errors: NotUserTurn, LabelSchemaViolation, UnknownTurn.
AnnotatedDialogue annotate_utterance(AnnotatedDialogue dialogue, int turn_index,
                                     const AmbiguityLabel& label);

// One JSON object per trial per line, keys in the fixed order
// trial_id, task, turns, labels, frame_refs. Errors: SerializationError.
std::string export_jsonl(std::span<const AnnotatedDialogue> dialogues);

// Inverse of export_jsonl; every record is schema-checked.
// Errors: MalformedRecord, LabelSchemaViolation.
std::vector<AnnotatedDialogue> import_jsonl(std::string_view text);

struct AmbiguityDistribution {
  // Every task has a row, zero when absent.
  // counts[task][column]; column 0 = Specific, 1..5 = ambiguity types in
  // kAllAmbiguityTypes order.
  std::map<Task, std::array<std::size_t, 6>> counts;
  std::map<Task, std::size_t> utterances;       // both speakers
  std::map<Task, std::size_t> user_utterances;
  std::map<Task, std::size_t> labeled_turns;

  // Share of each column's total contributed by every task (column
  // orientation of the "task distribution per ambiguity type" view).
  std::map<Task, std::array<double, 6>> task_share_by_column() const;
};

inline constexpr std::array<std::string_view, 6> kDistributionColumns = {
    "Specific",        "Spatial",           "Referential",
    "IntentPragmatic", "TemporalIncremental", "OutOfScope"};

AmbiguityDistribution ambiguity_distribution(
    std::span<const AnnotatedDialogue> dialogues);

}  // namespace sessionforge::dialogue

#endif  // SESSIONFORGE_DIALOGUE_HPP_
