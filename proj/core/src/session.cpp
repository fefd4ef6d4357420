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

#include "sessionforge/session.hpp"

#include <cmath>
#include <ctime>
#include <regex>
#include <set>

#include "json.hpp"
#include "sessionforge/error.hpp"
#include "text_io.hpp"

namespace sessionforge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::VideoFrames: return "video_frames";
    case StreamKind::Numeric: return "numeric";
    case StreamKind::Audio: return "audio";
  }
  return "unknown";
}

std::optional<StreamKind> parse_stream_kind(std::string_view s) {
  for (StreamKind k : {StreamKind::VideoFrames, StreamKind::Numeric, StreamKind::Audio}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

const StreamDescriptor* SessionManifest::find_stream(std::string_view name) const {
  for (const auto& s : streams) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

[[noreturn]] void malformed(const std::string& why) {
  throw Error(module_name::kSessionStore, "MalformedManifest", why);
}

json manifest_json(const SessionManifest& m) {
  json streams = json::array();
  for (const auto& s : m.streams) {
    json channels = json::array();
    for (const auto& c : s.channels) channels.push_back({{"name", c.name}, {"unit", c.unit}});
    streams.push_back({{"name", s.name},
                       {"kind", std::string(to_string(s.kind))},
                       {"nominal_rate", s.nominal_rate},
                       {"channels", channels},
                       {"file", s.file}});
  }
  json j;
  j["session_id"] = m.session_id;
  j["participant_id"] = m.participant_id;
  j["task"] = m.task;
  j["success"] = m.success ? json(*m.success) : json(nullptr);
  j["flags"] = m.flags;
  j["created_at"] = m.created_at;
  j["notes"] = m.notes;
  j["streams"] = streams;
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) malformed(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(std::string("field '") + key + "' has the wrong type");
  }
}

SessionManifest manifest_from(const json& j) {
  if (!j.is_object()) malformed("manifest is not a JSON object");
  SessionManifest m;
  m.session_id = field<std::string>(j, "session_id");
  m.participant_id = j.value("participant_id", std::string{});
  m.task = field<std::string>(j, "task");
  if (j.contains("success") && !j.at("success").is_null()) {
    if (!j.at("success").is_boolean()) malformed("field 'success' must be boolean or null");
    m.success = j.at("success").get<bool>();
  }
  if (j.contains("flags")) m.flags = field<std::vector<std::string>>(j, "flags");
  m.created_at = j.value("created_at", std::string{});
  m.notes = j.value("notes", std::string{});
  if (!j.contains("streams") || !j.at("streams").is_array()) malformed("missing 'streams' array");
  for (const auto& sj : j.at("streams")) {
    StreamDescriptor s;
    s.name = field<std::string>(sj, "name");
    auto kind = parse_stream_kind(field<std::string>(sj, "kind"));
    if (!kind) malformed("stream '" + s.name + "' has unknown kind");
    s.kind = *kind;
    s.nominal_rate = field<double>(sj, "nominal_rate");
    s.file = field<std::string>(sj, "file");
    if (sj.contains("channels")) {
      for (const auto& cj : sj.at("channels")) {
        s.channels.push_back({field<std::string>(cj, "name"), field<std::string>(cj, "unit")});
      }
    }
    m.streams.push_back(std::move(s));
  }
  return m;
}

void add(std::vector<Violation>& out, std::string fld, std::string rule,
         Severity sev = Severity::Error) {
  out.push_back({std::move(fld), std::move(rule), sev});
}

bool is_relative_inside(const std::string& p) {
  if (p.empty()) return false;
  fs::path path(p);
  if (path.is_absolute()) return false;
  for (const auto& part : path) {
    if (part == "..") return false;
  }
  return true;
}

fs::path video_timestamps_path(const fs::path& root, const std::string& name) {
  return root / "video" / (name + ".timestamps.csv");
}

}  // namespace

std::string manifest_to_json(const SessionManifest& manifest) {
  return manifest_json(manifest).dump(2) + "\n";
}

SessionManifest manifest_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  return manifest_from(j);
}

SessionManifest load_manifest(const fs::path& manifest_file) {
  return manifest_from_json(detail::read_file(manifest_file, module_name::kSessionStore));
}

void save_manifest(const SessionManifest& manifest, const fs::path& manifest_file) {
  detail::write_file(manifest_file, manifest_to_json(manifest), module_name::kSessionStore);
}

std::vector<Violation> validate_manifest(const SessionManifest& m) {
  std::vector<Violation> out;
  if (m.session_id.empty()) add(out, "session_id", "non-empty");
  if (!parse_task(m.task)) add(out, "task", "task-not-in-taxonomy");
  static const std::regex kIso(R"(^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z$)");
  if (!std::regex_match(m.created_at, kIso)) add(out, "created_at", "utc-iso8601");
  if (m.success ? *m.success != m.flags.empty() : !m.flags.empty()) {
    add(out, "success", "success-iff-no-flags");
  }

  std::set<std::string> names;
  for (const auto& s : m.streams) {
    const std::string f = "streams[" + s.name + "]";
    if (s.name.empty()) add(out, f + ".name", "non-empty");
    if (!names.insert(s.name).second) add(out, f + ".name", "unique");
    if (!(s.nominal_rate > 0.0) || !std::isfinite(s.nominal_rate)) {
      add(out, f + ".nominal_rate", "positive");
    }
    if (!is_relative_inside(s.file)) add(out, f + ".file", "relative-path");
    switch (s.kind) {
      case StreamKind::VideoFrames:
        if (s.channels.size() != 1) add(out, f + ".channels", "video-single-channel");
        break;
      case StreamKind::Numeric:
        if (s.channels.empty()) add(out, f + ".channels", "numeric-has-channels");
        break;
      case StreamKind::Audio:
        if (s.nominal_rate != kConformantAudioRate) {
          add(out, f + ".nominal_rate", "audio-rate-nonconformant", Severity::Warning);
        }
        break;
    }
    std::set<std::string> channel_names;
    for (const auto& c : s.channels) {
      if (c.name.empty()) add(out, f + ".channels", "channel-name-non-empty");
      if (!channel_names.insert(c.name).second) add(out, f + ".channels", "channel-name-unique");
      if (c.unit.empty()) add(out, f + ".channels[" + c.name + "].unit", "unit-non-empty");
    }
  }
  return out;
}

std::vector<Violation> validate_session(const RawSession& session) {
  auto out = validate_manifest(session.manifest);
  const auto& m = session.manifest;
  for (const auto& s : m.streams) {
    const std::string f = "streams[" + s.name + "]";
    switch (s.kind) {
      case StreamKind::Numeric: {
        auto it = session.numeric.find(s.name);
        if (it == session.numeric.end()) {
          add(out, f, "data-present");
          break;
        }
        if (it->second.channels != s.channels) add(out, f + ".channels", "matches-manifest");
        if (auto v = check_series(it->second)) add(out, f + ".data", *v);
        break;
      }
      case StreamKind::VideoFrames: {
        auto it = session.video.find(s.name);
        if (it == session.video.end()) {
          add(out, f, "data-present");
          break;
        }
        if (auto v = check_timestamps(it->second.timestamps)) add(out, f + ".data", *v);
        break;
      }
      case StreamKind::Audio: {
        auto it = session.audio.find(s.name);
        if (it == session.audio.end()) {
          add(out, f, "data-present");
          break;
        }
        const auto& meta = it->second.meta;
        if (meta.bit_depth != 16) add(out, f + ".bit_depth", "pcm16");
        if (meta.file != s.file) add(out, f + ".file", "matches-audio-meta");
        if (meta.channels < 1) add(out, f + ".channels", "positive");
        if (meta.channels != 1) add(out, f + ".channels", "audio-mono-nonconformant", Severity::Warning);
        if (static_cast<double>(meta.sample_rate) != s.nominal_rate) {
          add(out, f + ".sample_rate", "matches-nominal-rate");
        }
        if (it->second.samples.size() % static_cast<std::size_t>(std::max(meta.channels, 1)) != 0) {
          add(out, f + ".samples", "whole-frames");
        }
        break;
      }
    }
  }
  auto orphan = [&](const std::string& name, StreamKind kind) {
    const auto* d = m.find_stream(name);
    if (!d || d->kind != kind) add(out, "streams[" + name + "]", "declared-in-manifest");
  };
  for (const auto& [name, _] : session.numeric) orphan(name, StreamKind::Numeric);
  for (const auto& [name, _] : session.video) orphan(name, StreamKind::VideoFrames);
  for (const auto& [name, _] : session.audio) orphan(name, StreamKind::Audio);

  if (session.dialogue) {
    if (auto v = dialogue::check_dialogue(*session.dialogue)) add(out, "dialogue", *v);
    if (session.dialogue->trial_id != m.session_id) add(out, "dialogue.trial_id", "matches-session-id");
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.severity == Severity::Error) return true;
  }
  return false;
}

std::string describe(const Violation& v) {
  return std::string(v.severity == Severity::Error ? "" : "warning: ") + v.field + ": " + v.rule;
}

namespace {

void throw_if_invalid(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.severity == Severity::Error) {
      throw Error(module_name::kSessionStore, "InvariantViolation", describe(v));
    }
  }
}

}  // namespace

RawSession load_session(const fs::path& root) {
  RawSession session;
  session.manifest = load_manifest(root / "manifest.json");
  for (const auto& s : session.manifest.streams) {
    if (!is_relative_inside(s.file)) {
      throw Error(module_name::kSessionStore, "InvariantViolation",
                  "streams[" + s.name + "].file: relative-path");
    }
    switch (s.kind) {
      case StreamKind::Numeric: {
        const fs::path p = root / s.file;
        auto series = detail::series_from_csv(detail::read_file(p, module_name::kSessionStore),
                                              s.channels, p.string());
        if (auto v = check_series(series)) {
          throw Error(module_name::kSessionStore, "InvariantViolation",
                      *v + " (stream " + s.name + ")");
        }
        session.numeric.emplace(s.name, std::move(series));
        break;
      }
      case StreamKind::VideoFrames: {
        const fs::path p = video_timestamps_path(root, s.name);
        FrameTimestampLog log{s.name, detail::timestamps_from_csv(
                                          detail::read_file(p, module_name::kSessionStore),
                                          p.string())};
        if (auto v = check_timestamps(log.timestamps)) {
          throw Error(module_name::kSessionStore, "InvariantViolation",
                      *v + " (stream " + s.name + ")");
        }
        session.video.emplace(s.name, std::move(log));
        break;
      }
      case StreamKind::Audio: {
        AudioTrack track = read_wav(root / s.file);
        track.meta.file = s.file;
        session.audio.emplace(s.name, std::move(track));
        break;
      }
    }
  }
  const fs::path dialogue_file = root / "dialogue.jsonl";
  if (fs::exists(dialogue_file)) {
    auto records = dialogue::import_jsonl(
        detail::read_file(dialogue_file, module_name::kSessionStore));
    if (records.size() > 1) malformed("dialogue.jsonl holds more than one trial record");
    if (!records.empty()) session.dialogue = std::move(records.front());
  }
  throw_if_invalid(validate_session(session));
  return session;
}

void save_session(const RawSession& session, const fs::path& root) {
  throw_if_invalid(validate_session(session));
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw Error(module_name::kSessionStore, "IoError",
                "cannot create " + root.string() + (ec ? ": " + ec.message() : ""));
  }
  for (const auto& s : session.manifest.streams) {
    switch (s.kind) {
      case StreamKind::Numeric:
        detail::write_file(root / s.file, detail::series_to_csv(session.numeric.at(s.name)),
                           module_name::kSessionStore);
        break;
      case StreamKind::VideoFrames:
        detail::write_file(video_timestamps_path(root, s.name),
                           detail::timestamps_to_csv(session.video.at(s.name).timestamps),
                           module_name::kSessionStore);
        break;
      case StreamKind::Audio:
        write_wav(root / s.file, session.audio.at(s.name));
        break;
    }
  }
  std::string dialogue_text;
  if (session.dialogue) {
    dialogue_text = dialogue::export_jsonl(std::span(&*session.dialogue, 1));
  }
  detail::write_file(root / "dialogue.jsonl", dialogue_text, module_name::kSessionStore);
  save_manifest(session.manifest, root / "manifest.json");
}

std::string utc_now_iso8601() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sessionforge
