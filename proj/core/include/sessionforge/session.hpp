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

#ifndef SESSIONFORGE_SESSION_HPP_
#define SESSIONFORGE_SESSION_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/dialogue.hpp"
#include "sessionforge/series.hpp"
#include "sessionforge/task.hpp"
#include "sessionforge/wav.hpp"

// Session data model and the on-disk container:
//
//   <root>/manifest.json
//   <root>/streams/<name>.csv            numeric, header "t,<ch1>,..."
//   <root>/video/<name>.timestamps.csv   frame timestamps, header "t"
//   <root>/audio/<name>.wav              16-bit PCM
//   <root>/dialogue.jsonl                zero or one record for the trial
//
// Floats are written with 17 significant digits so a save/load round trip
// reproduces every bit pattern.
namespace sessionforge {

enum class StreamKind { VideoFrames, Numeric, Audio };

std::string_view to_string(StreamKind kind);
std::optional<StreamKind> parse_stream_kind(std::string_view s);

struct StreamDescriptor {
  std::string name;
  StreamKind kind = StreamKind::Numeric;
  double nominal_rate = 0.0;  // Hz
  std::vector<Channel> channels;
  // Numeric: the CSV; VideoFrames: opaque reference to the video file
  // (timestamps live in video/<name>.timestamps.csv); Audio: the WAV.
  std::string file;

  bool operator==(const StreamDescriptor&) const = default;
};

struct SessionManifest {
  std::string session_id;
  std::string participant_id;
  std::string task;  // one of the Task names; kept as text so it can be validated
  std::optional<bool> success;
  std::vector<std::string> flags;  // curation violation flags
  std::string created_at;          // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  std::vector<StreamDescriptor> streams;
  std::string notes;

  bool operator==(const SessionManifest&) const = default;

  const StreamDescriptor* find_stream(std::string_view name) const;
};

struct RawSession {
  SessionManifest manifest;
  std::map<std::string, TimedSeries> numeric;
  std::map<std::string, FrameTimestampLog> video;
  std::map<std::string, AudioTrack> audio;
  std::optional<dialogue::AnnotatedDialogue> dialogue;

  bool operator==(const RawSession&) const = default;
};

enum class Severity { Error, Warning };

struct Violation {
  std::string field;
  std::string rule;
  Severity severity = Severity::Error;

  bool operator==(const Violation&) const = default;
};

inline constexpr int kConformantAudioRate = 48000;
inline constexpr int kConformantBitDepth = 16;

// Empty iff every manifest invariant holds (conformance warnings such
// as a non-48 kHz audio stream are reported with Severity::Warning).
std::vector<Violation> validate_manifest(const SessionManifest& manifest);

// Manifest checks plus per-stream data invariants.
std::vector<Violation> validate_session(const RawSession& session);

bool has_errors(const std::vector<Violation>& violations);
std::string describe(const Violation& v);

// Errors: MissingFile, MalformedManifest, InvariantViolation.
RawSession load_session(const std::filesystem::path& root);

// Errors: IoError, InvariantViolation.
void save_session(const RawSession& session, const std::filesystem::path& root);

SessionManifest load_manifest(const std::filesystem::path& manifest_file);
void save_manifest(const SessionManifest& manifest,
                   const std::filesystem::path& manifest_file);

std::string manifest_to_json(const SessionManifest& manifest);
SessionManifest manifest_from_json(std::string_view text);

// Current UTC time in the manifest's created_at format.
std::string utc_now_iso8601();

}  // namespace sessionforge

#endif  // SESSIONFORGE_SESSION_HPP_
