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

#include "sessionforge/series.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sessionforge {

void TimedSeries::append(double t, std::span<const double> row) {
  if (row.size() != channels.size()) {
    throw std::invalid_argument("TimedSeries::append: row width does not match channel count");
  }
  timestamps.push_back(t);
  values.insert(values.end(), row.begin(), row.end());
}

std::vector<double> TimedSeries::column(std::size_t channel) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(i, channel);
  return out;
}

void TimedSeries::set_column(std::size_t channel, std::span<const double> data) {
  if (data.size() != size()) {
    throw std::invalid_argument("TimedSeries::set_column: length mismatch");
  }
  for (std::size_t i = 0; i < data.size(); ++i) value(i, channel) = data[i];
}

std::optional<std::size_t> TimedSeries::channel_index(std::string_view name) const {
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].name == name) return c;
  }
  return std::nullopt;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) {
      // Text round trips canonicalise NaN payloads.
      if (!(std::isnan(a[i]) && std::isnan(b[i]))) return false;
    }
  }
  return true;
}

bool operator==(const TimedSeries& a, const TimedSeries& b) {
  return a.channels == b.channels && bit_equal(a.timestamps, b.timestamps) &&
         bit_equal(a.values, b.values);
}

bool FrameTimestampLog::operator==(const FrameTimestampLog& other) const {
  return stream == other.stream && bit_equal(timestamps, other.timestamps);
}

std::optional<std::string> check_timestamps(std::span<const double> timestamps) {
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (!std::isfinite(timestamps[i])) return "timestamps finite";
    if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
      return "timestamps strictly increasing";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_series(const TimedSeries& series) {
  if (series.values.size() != series.timestamps.size() * series.channels.size()) {
    return "values shape N x C";
  }
  if (auto v = check_timestamps(series.timestamps)) return v;
  for (double v : series.values) {
    if (std::isinf(v)) return "values finite or NaN gap";
  }
  return std::nullopt;
}

}  // namespace sessionforge
