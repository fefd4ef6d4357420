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

#ifndef SESSIONFORGE_WAV_HPP_
#define SESSIONFORGE_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sessionforge {

struct AudioMeta {
  int sample_rate = 48000;
  int bit_depth = 16;
  int channels = 1;
  std::string encoding = "PCM";
  std::string file;

  bool operator==(const AudioMeta&) const = default;
};

// 16-bit PCM, interleaved when channels > 1.
struct AudioTrack {
  AudioMeta meta;
  std::vector<std::int16_t> samples;

  bool operator==(const AudioTrack&) const = default;
};

// RIFF/WAVE PCM. Only 16-bit PCM is supported.
void write_wav(const std::filesystem::path& path, const AudioTrack& track);
AudioTrack read_wav(const std::filesystem::path& path);

}  // namespace sessionforge

#endif  // SESSIONFORGE_WAV_HPP_
