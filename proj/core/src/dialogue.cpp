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

#include "sessionforge/dialogue.hpp"

#include <set>

#include "json.hpp"
#include "sessionforge/error.hpp"

namespace sessionforge::dialogue {

using json = nlohmann::ordered_json;

std::string_view to_string(Speaker speaker) {
  return speaker == Speaker::User ? "User" : "Robot";
}

std::string_view to_string(Clarity clarity) {
  return clarity == Clarity::Specific ? "Specific" : "Ambiguous";
}

std::string_view to_string(AmbiguityType type) {
  switch (type) {
    case AmbiguityType::Spatial: return "Spatial";
    case AmbiguityType::Referential: return "Referential";
    case AmbiguityType::IntentPragmatic: return "IntentPragmatic";
    case AmbiguityType::TemporalIncremental: return "TemporalIncremental";
    case AmbiguityType::OutOfScope: return "OutOfScope";
  }
  return "Unknown";
}

std::optional<Speaker> parse_speaker(std::string_view s) {
  if (s == "User") return Speaker::User;
  if (s == "Robot") return Speaker::Robot;
  return std::nullopt;
}

std::optional<Clarity> parse_clarity(std::string_view s) {
  if (s == "Specific") return Clarity::Specific;
  if (s == "Ambiguous") return Clarity::Ambiguous;
  return std::nullopt;
}

std::optional<AmbiguityType> parse_ambiguity_type(std::string_view s) {
  for (auto t : kAllAmbiguityTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

void check_label(const AmbiguityLabel& label) {
  if (label.clarity == Clarity::Ambiguous && !label.type) {
    throw Error(module_name::kDialogue, "LabelSchemaViolation",
                "Ambiguous label requires an ambiguity type");
  }
  if (label.clarity == Clarity::Specific && label.type) {
    throw Error(module_name::kDialogue, "LabelSchemaViolation",
                "Specific label must not carry an ambiguity type");
  }
}

namespace {

const Utterance* find_turn(const AnnotatedDialogue& d, int turn_index) {
  for (const auto& u : d.turns) {
    if (u.turn_index == turn_index) return &u;
  }
  return nullptr;
}

}  // namespace

std::optional<std::string> check_dialogue(const AnnotatedDialogue& d) {
  std::set<int> seen;
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    const auto& u = d.turns[i];
    if (!(u.t_start < u.t_end)) return "turn " + std::to_string(u.turn_index) + ": t_start < t_end";
    if (u.trial_id != d.trial_id) return "turn " + std::to_string(u.turn_index) + ": trial_id matches";
    if (!seen.insert(u.turn_index).second) return "turn_index unique";
  }
  // Contiguous: indices are exactly {first, first+1, ...} with no holes.
  if (!seen.empty() &&
      *seen.rbegin() - *seen.begin() != static_cast<int>(seen.size()) - 1) {
    return "turn_index contiguous";
  }
  for (const auto& [index, label] : d.labels) {
    const Utterance* u = find_turn(d, index);
    if (!u) return "label on unknown turn " + std::to_string(index);
    if (u->speaker != Speaker::User) return "label on non-user turn " + std::to_string(index);
    if ((label.clarity == Clarity::Ambiguous) != label.type.has_value()) {
      return "label schema on turn " + std::to_string(index);
    }
  }
  for (const auto& [index, _] : d.frame_refs) {
    if (!find_turn(d, index)) return "frame_ref on unknown turn " + std::to_string(index);
  }
  return std::nullopt;
}

std::optional<std::string> check_frame_refs(const AnnotatedDialogue& d, std::size_t grid_size) {
  for (const auto& [index, frame] : d.frame_refs) {
    if (frame < 0 || static_cast<std::size_t>(frame) >= grid_size) {
      return "frame_ref of turn " + std::to_string(index) + " outside grid";
    }
  }
  return std::nullopt;
}

AnnotatedDialogue annotate_utterance(AnnotatedDialogue dialogue, int turn_index,
                                     const AmbiguityLabel& label) {
  const Utterance* u = find_turn(dialogue, turn_index);
  if (!u) {
    throw Error(module_name::kDialogue, "UnknownTurn",
                "trial " + dialogue.trial_id + " has no turn " + std::to_string(turn_index));
  }
  if (u->speaker != Speaker::User) {
    throw Error(module_name::kDialogue, "NotUserTurn",
                "turn " + std::to_string(turn_index) + " is spoken by the robot");
  }
  check_label(label);
  dialogue.labels[turn_index] = label;
  return dialogue;
}

namespace {

json to_json(const AnnotatedDialogue& d) {
  json turns = json::array();
  for (const auto& u : d.turns) {
    json t;
    t["speaker"] = std::string(to_string(u.speaker));
    t["text"] = u.text;
    t["t_start"] = u.t_start;
    t["t_end"] = u.t_end;
    t["trial_id"] = u.trial_id;
    t["turn_index"] = u.turn_index;
    turns.push_back(std::move(t));
  }
  json labels = json::object();
  for (const auto& [index, label] : d.labels) {
    json l;
    l["clarity"] = std::string(to_string(label.clarity));
    l["type"] = label.type ? json(std::string(to_string(*label.type))) : json(nullptr);
    labels[std::to_string(index)] = std::move(l);
  }
  json frames = json::object();
  for (const auto& [index, frame] : d.frame_refs) frames[std::to_string(index)] = frame;

  json j;
  j["trial_id"] = d.trial_id;
  j["task"] = std::string(sessionforge::to_string(d.task));
  j["turns"] = std::move(turns);
  j["labels"] = std::move(labels);
  j["frame_refs"] = std::move(frames);
  return j;
}

[[noreturn]] void bad_record(std::size_t line, const std::string& why) {
  throw Error(module_name::kDialogue, "MalformedRecord",
              "line " + std::to_string(line) + ": " + why);
}

int parse_index(const std::string& key, std::size_t line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(key, &used);
    if (used != key.size()) bad_record(line, "non-integer turn key '" + key + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_record(line, "non-integer turn key '" + key + "'");
  }
}

AnnotatedDialogue from_json(const json& j, std::size_t line) {
  try {
    AnnotatedDialogue d;
    d.trial_id = j.at("trial_id").get<std::string>();
    auto task = parse_task(j.at("task").get<std::string>());
    if (!task) bad_record(line, "unknown task");
    d.task = *task;
    for (const auto& t : j.at("turns")) {
      Utterance u;
      auto speaker = parse_speaker(t.at("speaker").get<std::string>());
      if (!speaker) bad_record(line, "unknown speaker");
      u.speaker = *speaker;
      u.text = t.at("text").get<std::string>();
      u.t_start = t.at("t_start").get<double>();
      u.t_end = t.at("t_end").get<double>();
      u.trial_id = t.at("trial_id").get<std::string>();
      u.turn_index = t.at("turn_index").get<int>();
      d.turns.push_back(std::move(u));
    }
    for (const auto& [key, l] : j.at("labels").items()) {
      AmbiguityLabel label;
      auto clarity = parse_clarity(l.at("clarity").get<std::string>());
      if (!clarity) bad_record(line, "unknown clarity");
      label.clarity = *clarity;
      if (l.contains("type") && !l.at("type").is_null()) {
        auto type = parse_ambiguity_type(l.at("type").get<std::string>());
        if (!type) bad_record(line, "unknown ambiguity type");
        label.type = *type;
      }
      check_label(label);
      d.labels[parse_index(key, line)] = label;
    }
    if (j.contains("frame_refs") && !j.at("frame_refs").is_null()) {
      for (const auto& [key, f] : j.at("frame_refs").items()) {
        d.frame_refs[parse_index(key, line)] = f.get<long>();
      }
    }
    if (auto v = check_dialogue(d)) {
      throw Error(module_name::kDialogue, "LabelSchemaViolation",
                  "line " + std::to_string(line) + ": " + *v);
    }
    return d;
  } catch (const json::exception& e) {
    bad_record(line, e.what());
  }
}

}  // namespace

std::string export_jsonl(std::span<const AnnotatedDialogue> dialogues) {
  std::string out;
  for (const auto& d : dialogues) {
    if (auto v = check_dialogue(d)) {
      throw Error(module_name::kDialogue, "SerializationError", d.trial_id + ": " + *v);
    }
    try {
      // dump() escapes control characters, so embedded newlines stay on one line.
      out += to_json(d).dump();
    } catch (const json::type_error& e) {
      throw Error(module_name::kDialogue, "SerializationError", d.trial_id + ": " + e.what());
    }
    out += '\n';
  }
  return out;
}

std::vector<AnnotatedDialogue> import_jsonl(std::string_view text) {
  std::vector<AnnotatedDialogue> out;
  std::size_t start = 0;
  std::size_t line = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view record = text.substr(start, end - start);
    ++line;
    start = end + 1;
    if (!record.empty() && record.back() == '\r') record.remove_suffix(1);
    if (record.empty()) continue;
    json j;
    try {
      j = json::parse(record);
    } catch (const json::parse_error& e) {
      bad_record(line, e.what());
    }
    out.push_back(from_json(j, line));
  }
  return out;
}

std::map<Task, std::array<double, 6>> AmbiguityDistribution::task_share_by_column() const {
  std::array<std::size_t, 6> column_totals{};
  for (const auto& [task, row] : counts) {
    for (std::size_t c = 0; c < row.size(); ++c) column_totals[c] += row[c];
  }
  std::map<Task, std::array<double, 6>> out;
  for (const auto& [task, row] : counts) {
    auto& shares = out[task];
    for (std::size_t c = 0; c < row.size(); ++c) {
      shares[c] = column_totals[c] == 0
                      ? 0.0
                      : static_cast<double>(row[c]) / static_cast<double>(column_totals[c]);
    }
  }
  return out;
}

AmbiguityDistribution ambiguity_distribution(std::span<const AnnotatedDialogue> dialogues) {
  AmbiguityDistribution dist;
  for (Task t : kAllTasks) {
    dist.counts[t] = {};
    dist.utterances[t] = 0;
    dist.user_utterances[t] = 0;
    dist.labeled_turns[t] = 0;
  }
  for (const auto& d : dialogues) {
    auto& row = dist.counts[d.task];
    dist.utterances[d.task] += d.turns.size();
    for (const auto& u : d.turns) {
      if (u.speaker == Speaker::User) ++dist.user_utterances[d.task];
    }
    for (const auto& [index, label] : d.labels) {
      std::size_t column = 0;
      if (label.clarity == Clarity::Ambiguous && label.type) {
        column = 1 + static_cast<std::size_t>(*label.type);
      }
      ++row[column];
      ++dist.labeled_turns[d.task];
    }
  }
  return dist;
}

}  // namespace sessionforge::dialogue
