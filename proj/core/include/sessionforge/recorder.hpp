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

#ifndef SESSIONFORGE_RECORDER_HPP_
#define SESSIONFORGE_RECORDER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sessionforge/session.hpp"
#include "sessionforge/wire.hpp"

namespace sessionforge {

struct RecorderConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t tcp_port = 0;                 // 0 picks an ephemeral port
  std::optional<std::uint16_t> udp_port = 0;  // nullopt disables audio
  std::filesystem::path session_root;

  // topic -> stream. Numeric topics carry one value per channel; VideoFrames
  // topics carry the frame index and only their timestamps are kept.
  std::map<std::string, StreamDescriptor> streams;

  // session_id, participant_id, task and notes are copied into the manifest.
  SessionManifest manifest_template;

  std::string audio_stream = "audio";
  int audio_sample_rate = kConformantAudioRate;

  std::size_t high_water_mark = 10000;  // queued frames before reads pause
  bool rebase_time = true;              // earliest first sample becomes t = 0
};

struct RecorderStats {
  std::size_t frames_recorded = 0;
  std::size_t frames_malformed = 0;
  std::size_t frames_rejected = 0;  // well-formed but unusable (width, ordering)
  std::size_t datagrams_received = 0;
  std::size_t datagrams_malformed = 0;
  std::size_t connections = 0;
  std::map<std::string, std::size_t> frames_per_topic;
};

// Shareable handle to a running recording. stop() is idempotent: the first
// call drains every socket, flushes the session to `session_root` and
// returns it; later calls return the same session.
class RecordingHandle {
 public:
  std::uint16_t tcp_port() const;
  std::optional<std::uint16_t> udp_port() const;

  RecorderStats stats() const;
  RawSession stop();
  bool stopped() const;

  // Available after stop().
  std::vector<std::string> warnings() const;
  wire::GapReport audio_gaps() const;

  struct State;

 private:
  friend RecordingHandle start_recording(const RecorderConfig& config);
  explicit RecordingHandle(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

// Errors: BindError. Malformed input is counted, never fatal.
RecordingHandle start_recording(const RecorderConfig& config);

}  // namespace sessionforge

#endif  // SESSIONFORGE_RECORDER_HPP_
