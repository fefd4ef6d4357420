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

#ifndef SESSIONFORGE_WIRE_HPP_
#define SESSIONFORGE_WIRE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Bit-exact wire layouts shared by every sender and the recorder.
//
// TCP frame (all integers / floats big-endian):
//   u32  length   bytes that follow: topic + 0x00 + timestamp + payload
//   u8[] topic    UTF-8, non-empty, terminated by 0x00
//   f64  timestamp seconds
//   f64[] payload C channel values
//
// UDP audio datagram:
//   u32  sequence
//   f64  timestamp seconds (big-endian)
//   u8[] pcm      16-bit little-endian samples, even length
namespace sessionforge::wire {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kLengthPrefix = 4;
inline constexpr std::size_t kMinFrameBody = 1 + 1 + 8;  // 1-byte topic, NUL, timestamp
inline constexpr std::uint32_t kMaxFrameBody = 16u << 20;
inline constexpr std::size_t kDatagramHeader = 4 + 8;

struct TcpFrame {
  std::string topic;
  double timestamp = 0.0;
  std::vector<double> values;

  bool operator==(const TcpFrame& other) const;
};

struct Decoded {
  TcpFrame frame;
  std::size_t consumed = 0;
};

struct NeedMoreBytes {
  std::size_t count = 0;  // at least this many more bytes are required
};

using DecodeResult = std::variant<Decoded, NeedMoreBytes>;

Bytes encode_frame(const TcpFrame& frame);
void encode_frame_into(const TcpFrame& frame, Bytes& out);

// Decodes one frame from the front of `bytes`. Throws Error("MalformedFrame")
// on a bad terminator, empty topic, length mismatch or a payload that is not
// a multiple of 8 bytes.
DecodeResult frame_decode(std::span<const std::uint8_t> bytes);

// True when the malformed frame at the front of `bytes` can be skipped by its
// length prefix (the prefix itself is plausible).
std::optional<std::size_t> skippable_length(std::span<const std::uint8_t> bytes);

struct AudioDatagram {
  std::uint32_t sequence = 0;
  double timestamp = 0.0;
  Bytes pcm;

  bool operator==(const AudioDatagram& other) const;
};

Bytes encode_datagram(const AudioDatagram& datagram);
// Errors: MalformedDatagram (short header or odd PCM length).
AudioDatagram decode_datagram(std::span<const std::uint8_t> bytes);

struct SequenceRange {
  std::uint32_t first = 0;
  std::uint32_t last = 0;  // inclusive

  bool operator==(const SequenceRange&) const = default;
};

struct GapReport {
  std::string stream;
  std::vector<SequenceRange> missing_sequences;
  std::size_t received = 0;
  std::size_t expected = 0;
  std::size_t duplicates = 0;

  std::size_t missing_count() const;
  bool operator==(const GapReport&) const = default;
};

struct ReassemblyOptions {
  std::string stream = "audio";
  std::uint32_t first_sequence = 0;
  // Total datagrams the sender emitted; lets trailing losses be reported.
  std::optional<std::size_t> expected_count;
  // Zero-fill size for a lost datagram; defaults to the most common
  // received payload size.
  std::optional<std::size_t> chunk_bytes;
};

struct Reassembled {
  std::vector<std::int16_t> pcm;
  GapReport gaps;
};

// Orders by sequence, keeps the first copy of duplicates, zero-fills gaps at
// the nominal chunk size. Loss is reported, never thrown.
Reassembled audio_reassemble(std::span<const AudioDatagram> datagrams,
                             const ReassemblyOptions& options = {});

std::vector<std::int16_t> pcm_from_bytes(std::span<const std::uint8_t> bytes);
Bytes pcm_to_bytes(std::span<const std::int16_t> samples);

}  // namespace sessionforge::wire

#endif  // SESSIONFORGE_WIRE_HPP_
