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

#ifndef SESSIONFORGE_SERIES_HPP_
#define SESSIONFORGE_SERIES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sessionforge {

struct Channel {
  std::string name;
  std::string unit;

  bool operator==(const Channel&) const = default;
};

// Row-major N x C samples with one timestamp (seconds) per row. NaN in
// `values` marks a sensor gap.
struct TimedSeries {
  std::vector<Channel> channels;
  std::vector<double> timestamps;
  std::vector<double> values;

  TimedSeries() = default;
  explicit TimedSeries(std::vector<Channel> chans) : channels(std::move(chans)) {}

  std::size_t size() const { return timestamps.size(); }
  std::size_t channel_count() const { return channels.size(); }
  bool empty() const { return timestamps.empty(); }

  void append(double t, std::span<const double> row);

  double value(std::size_t row, std::size_t channel) const {
    return values[row * channels.size() + channel];
  }
  double& value(std::size_t row, std::size_t channel) {
    return values[row * channels.size() + channel];
  }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * channels.size(), channels.size()};
  }

  std::vector<double> column(std::size_t channel) const;
  void set_column(std::size_t channel, std::span<const double> data);
  std::optional<std::size_t> channel_index(std::string_view name) const;

  // Bitwise equality of every float; any two NaNs (gap markers) match.
  friend bool operator==(const TimedSeries& a, const TimedSeries& b);
};

struct FrameTimestampLog {
  std::string stream;
  std::vector<double> timestamps;

  bool operator==(const FrameTimestampLog& other) const;
};

// First violated invariant of a series, or nullopt. NaN is allowed in values
// (gap marker), never in timestamps.
std::optional<std::string> check_timestamps(std::span<const double> timestamps);
std::optional<std::string> check_series(const TimedSeries& series);

bool bit_equal(std::span<const double> a, std::span<const double> b);

}  // namespace sessionforge

#endif  // SESSIONFORGE_SERIES_HPP_
