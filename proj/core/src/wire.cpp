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

#include "sessionforge/wire.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>

#include "sessionforge/error.hpp"

namespace sessionforge::wire {

namespace {

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_f64(Bytes& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(bits >> shift));
  }
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

double get_f64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < 8; ++i) bits = (bits << 8) | b[at + i];
  return std::bit_cast<double>(bits);
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(module_name::kTransport, "MalformedFrame", why);
}

}  // namespace

bool TcpFrame::operator==(const TcpFrame& other) const {
  return topic == other.topic &&
         std::bit_cast<std::uint64_t>(timestamp) == std::bit_cast<std::uint64_t>(other.timestamp) &&
         values.size() == other.values.size() &&
         std::equal(values.begin(), values.end(), other.values.begin(), [](double a, double b) {
           return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
         });
}

void encode_frame_into(const TcpFrame& frame, Bytes& out) {
  if (frame.topic.empty() || frame.topic.find('\0') != std::string::npos) {
    malformed("topic must be non-empty and contain no NUL byte");
  }
  const std::size_t body = frame.topic.size() + 1 + 8 + 8 * frame.values.size();
  if (body > kMaxFrameBody) malformed("frame exceeds maximum size");
  out.reserve(out.size() + kLengthPrefix + body);
  put_u32(out, static_cast<std::uint32_t>(body));
  out.insert(out.end(), frame.topic.begin(), frame.topic.end());
  out.push_back(0);
  put_f64(out, frame.timestamp);
  for (double v : frame.values) put_f64(out, v);
}

Bytes encode_frame(const TcpFrame& frame) {
  Bytes out;
  encode_frame_into(frame, out);
  return out;
}

DecodeResult frame_decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kLengthPrefix) return NeedMoreBytes{kLengthPrefix - bytes.size()};
  const std::uint32_t length = get_u32(bytes, 0);
  if (length < kMinFrameBody) malformed("length " + std::to_string(length) + " below minimum");
  if (length > kMaxFrameBody) malformed("length " + std::to_string(length) + " above maximum");
  const std::size_t total = kLengthPrefix + length;
  if (bytes.size() < total) return NeedMoreBytes{total - bytes.size()};

  const auto body = bytes.subspan(kLengthPrefix, length);
  // The terminator must leave room for the 8-byte timestamp.
  const auto search_end = body.begin() + static_cast<std::ptrdiff_t>(length - 8);
  const auto nul = std::find(body.begin(), search_end, std::uint8_t{0});
  if (nul == search_end) malformed("missing topic terminator");
  const auto topic_len = static_cast<std::size_t>(nul - body.begin());
  if (topic_len == 0) malformed("empty topic");
  const std::size_t payload = length - topic_len - 1 - 8;
  if (payload % 8 != 0) malformed("payload length not a multiple of 8");

  Decoded d;
  d.frame.topic.assign(reinterpret_cast<const char*>(body.data()), topic_len);
  std::size_t at = topic_len + 1;
  d.frame.timestamp = get_f64(body, at);
  at += 8;
  d.frame.values.resize(payload / 8);
  for (auto& v : d.frame.values) {
    v = get_f64(body, at);
    at += 8;
  }
  d.consumed = total;
  return d;
}

std::optional<std::size_t> skippable_length(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kLengthPrefix) return std::nullopt;
  const std::uint32_t length = get_u32(bytes, 0);
  if (length < kMinFrameBody || length > kMaxFrameBody) return std::nullopt;
  return kLengthPrefix + length;
}

bool AudioDatagram::operator==(const AudioDatagram& other) const {
  return sequence == other.sequence &&
         std::bit_cast<std::uint64_t>(timestamp) == std::bit_cast<std::uint64_t>(other.timestamp) &&
         pcm == other.pcm;
}

Bytes encode_datagram(const AudioDatagram& datagram) {
  if (datagram.pcm.size() % 2 != 0) {
    throw Error(module_name::kTransport, "MalformedDatagram", "odd PCM length");
  }
  Bytes out;
  out.reserve(kDatagramHeader + datagram.pcm.size());
  put_u32(out, datagram.sequence);
  put_f64(out, datagram.timestamp);
  out.insert(out.end(), datagram.pcm.begin(), datagram.pcm.end());
  return out;
}

AudioDatagram decode_datagram(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kDatagramHeader) {
    throw Error(module_name::kTransport, "MalformedDatagram", "short datagram header");
  }
  if ((bytes.size() - kDatagramHeader) % 2 != 0) {
    throw Error(module_name::kTransport, "MalformedDatagram", "odd PCM length");
  }
  AudioDatagram d;
  d.sequence = get_u32(bytes, 0);
  d.timestamp = get_f64(bytes, 4);
  d.pcm.assign(bytes.begin() + kDatagramHeader, bytes.end());
  return d;
}

std::size_t GapReport::missing_count() const {
  std::size_t n = 0;
  for (const auto& r : missing_sequences) n += std::size_t{r.last} - r.first + 1;
  return n;
}

std::vector<std::int16_t> pcm_from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::int16_t> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::int16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
  }
  return out;
}

Bytes pcm_to_bytes(std::span<const std::int16_t> samples) {
  Bytes out(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto u = static_cast<std::uint16_t>(samples[i]);
    out[2 * i] = static_cast<std::uint8_t>(u & 0xFF);
    out[2 * i + 1] = static_cast<std::uint8_t>(u >> 8);
  }
  return out;
}

Reassembled audio_reassemble(std::span<const AudioDatagram> datagrams,
                             const ReassemblyOptions& options) {
  Reassembled result;
  result.gaps.stream = options.stream;

  // First arrival wins for duplicated sequence numbers.
  std::map<std::uint32_t, const AudioDatagram*> by_sequence;
  for (const auto& d : datagrams) {
    if (d.sequence < options.first_sequence) continue;
    if (!by_sequence.emplace(d.sequence, &d).second) ++result.gaps.duplicates;
  }

  std::size_t chunk = options.chunk_bytes.value_or(0);
  if (!options.chunk_bytes) {
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& [seq, d] : by_sequence) ++sizes[d->pcm.size()];
    std::size_t best = 0;
    for (const auto& [size, count] : sizes) {
      if (count > best) {
        best = count;
        chunk = size;
      }
    }
  }

  std::uint64_t end = options.first_sequence;  // one past the last expected
  if (!by_sequence.empty()) end = std::uint64_t{by_sequence.rbegin()->first} + 1;
  if (options.expected_count) {
    end = std::max<std::uint64_t>(end, std::uint64_t{options.first_sequence} + *options.expected_count);
  }
  result.gaps.expected = static_cast<std::size_t>(end - options.first_sequence);
  result.gaps.received = by_sequence.size();

  Bytes pcm;
  auto it = by_sequence.begin();
  for (std::uint64_t seq = options.first_sequence; seq < end; ++seq) {
    if (it != by_sequence.end() && it->first == seq) {
      pcm.insert(pcm.end(), it->second->pcm.begin(), it->second->pcm.end());
      ++it;
      continue;
    }
    auto& ranges = result.gaps.missing_sequences;
    const auto s = static_cast<std::uint32_t>(seq);
    if (!ranges.empty() && ranges.back().last + 1 == s) {
      ranges.back().last = s;
    } else {
      ranges.push_back({s, s});
    }
    pcm.insert(pcm.end(), chunk, std::uint8_t{0});
  }
  result.pcm = pcm_from_bytes(pcm);
  return result;
}

}  // namespace sessionforge::wire
