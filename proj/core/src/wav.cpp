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

#include "sessionforge/wav.hpp"

#include <cstring>

#include "sessionforge/error.hpp"
#include "text_io.hpp"

namespace sessionforge {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

std::uint32_t get_u32(const std::string& s, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + i]);
  return v;
}

std::uint16_t get_u16(const std::string& s, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[at]) |
                                    (static_cast<unsigned char>(s[at + 1]) << 8));
}

[[noreturn]] void malformed(const std::filesystem::path& path, const std::string& why) {
  throw Error(module_name::kSessionStore, "MalformedManifest", path.string() + ": " + why);
}

}  // namespace

void write_wav(const std::filesystem::path& path, const AudioTrack& track) {
  if (track.meta.bit_depth != 16 || track.meta.channels < 1) {
    throw Error(module_name::kSessionStore, "InvariantViolation",
                "only 16-bit PCM WAV output is supported");
  }
  const auto data_bytes = static_cast<std::uint32_t>(track.samples.size() * 2);
  const auto channels = static_cast<std::uint16_t>(track.meta.channels);
  const auto rate = static_cast<std::uint32_t>(track.meta.sample_rate);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * 2);
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (std::int16_t s : track.samples) put_u16(out, static_cast<std::uint16_t>(s));
  detail::write_file(path, out, module_name::kSessionStore);
}

AudioTrack read_wav(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path, module_name::kSessionStore);
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    malformed(path, "not a RIFF/WAVE file");
  }
  AudioTrack track;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const std::string id = bytes.substr(at, 4);
    const std::uint32_t size = get_u32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (body + size > bytes.size()) malformed(path, "truncated chunk '" + id + "'");
    if (id == "fmt ") {
      if (size < 16) malformed(path, "short fmt chunk");
      if (get_u16(bytes, body) != 1) malformed(path, "only PCM encoding is supported");
      track.meta.channels = get_u16(bytes, body + 2);
      track.meta.sample_rate = static_cast<int>(get_u32(bytes, body + 4));
      track.meta.bit_depth = get_u16(bytes, body + 14);
      if (track.meta.bit_depth != 16) malformed(path, "only 16-bit samples are supported");
      have_fmt = true;
    } else if (id == "data") {
      if (size % 2 != 0) malformed(path, "odd data chunk size");
      track.samples.resize(size / 2);
      for (std::size_t i = 0; i < track.samples.size(); ++i) {
        track.samples[i] = static_cast<std::int16_t>(get_u16(bytes, body + 2 * i));
      }
      have_data = true;
    }
    at = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) malformed(path, "missing fmt or data chunk");
  track.meta.encoding = "PCM";
  return track;
}

}  // namespace sessionforge
