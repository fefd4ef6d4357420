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

#include <algorithm>
#include <cctype>
#include <cmath>

#include "json.hpp"
#include "sessionforge/error.hpp"
#include "sessionforge/filter.hpp"

namespace sessionforge::dsp {

using json = nlohmann::ordered_json;

std::string_view to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::EEPose: return "EEPose";
    case ChannelClass::ArmJoints: return "ArmJoints";
    case ChannelClass::WheelchairWheels: return "WheelchairWheels";
    case ChannelClass::IMU: return "IMU";
  }
  return "Unknown";
}

std::optional<ChannelClass> parse_channel_class(std::string_view s) {
  for (auto c : {ChannelClass::EEPose, ChannelClass::ArmJoints, ChannelClass::WheelchairWheels,
                 ChannelClass::IMU}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::optional<ChannelClass> classify_stream(std::string_view stream_name) {
  std::string lower(stream_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  auto starts = [&](std::string_view p) { return lower.rfind(p, 0) == 0; };
  if (starts("ee")) return ChannelClass::EEPose;
  if (starts("arm") || starts("joint")) return ChannelClass::ArmJoints;
  if (starts("wheel")) return ChannelClass::WheelchairWheels;
  if (starts("imu")) return ChannelClass::IMU;
  return std::nullopt;
}

DenoisePolicy DenoisePolicy::standard() {
  DenoisePolicy p;
  p.classes[ChannelClass::EEPose] = {4, 5.0};
  p.classes[ChannelClass::ArmJoints] = {4, 5.0};
  p.classes[ChannelClass::WheelchairWheels] = {4, 5.0};
  p.classes[ChannelClass::IMU] = {4, 10.0};
  return p;
}

DenoisePolicy policy_from_json(std::string_view text) {
  DenoisePolicy p;
  try {
    const json j = json::parse(text);
    for (const auto& [key, value] : j.items()) {
      if (key == "strict") {
        p.strict = value.get<bool>();
        continue;
      }
      auto c = parse_channel_class(key);
      if (!c) throw Error(module_name::kDsp, "InvalidPolicy", "unknown channel class '" + key + "'");
      ClassFilter f;
      f.order = value.value("order", 4);
      f.cutoff = value.at("cutoff").get<double>();
      if (f.order < 1 || !(f.cutoff > 0.0)) {
        throw Error(module_name::kDsp, "InvalidPolicy", "class '" + key + "' needs order >= 1 and cutoff > 0");
      }
      p.classes[*c] = f;
    }
  } catch (const json::exception& e) {
    throw Error(module_name::kDsp, "InvalidPolicy", e.what());
  }
  return p;
}

std::string policy_to_json(const DenoisePolicy& policy) {
  json j;
  for (const auto& [c, f] : policy.classes) {
    j[std::string(to_string(c))] = {{"order", f.order}, {"cutoff", f.cutoff}};
  }
  j["strict"] = policy.strict;
  return j.dump(2) + "\n";
}

double effective_cutoff(double cutoff, double sample_rate) {
  return cutoff < 0.5 * sample_rate ? cutoff : 0.45 * sample_rate;
}

namespace {

void filter_series(TimedSeries& series, const FilterSpec& spec) {
  for (std::size_t c = 0; c < series.channel_count(); ++c) {
    const auto column = series.column(c);
    series.set_column(c, filtfilt(spec, column));
  }
}

bool has_gaps(const TimedSeries& s) {
  return std::any_of(s.values.begin(), s.values.end(), [](double v) { return std::isnan(v); });
}

}  // namespace

RawSession prefilter_native(const RawSession& session, const DenoisePolicy& policy,
                            double grid_rate, std::vector<std::string>& prefiltered,
                            std::vector<std::string>& warnings) {
  RawSession out = session;
  for (const auto& d : session.manifest.streams) {
    if (d.kind != StreamKind::Numeric) continue;
    auto cls = classify_stream(d.name);
    if (!cls) continue;
    auto it = policy.classes.find(*cls);
    if (it == policy.classes.end()) continue;
    const ClassFilter& f = it->second;
    if (f.cutoff < 0.5 * grid_rate) continue;  // realisable on the grid
    if (!(d.nominal_rate > 2.0 * f.cutoff)) continue;
    auto& series = out.numeric.at(d.name);
    if (has_gaps(series)) {
      warnings.push_back("stream '" + d.name + "' has gaps; native-rate prefilter skipped");
      continue;
    }
    if (series.size() <= static_cast<std::size_t>(3 * f.order)) continue;
    filter_series(series, design_butterworth_lowpass(f.order, f.cutoff, d.nominal_rate));
    prefiltered.push_back(d.name);
  }
  return out;
}

sync::SyncedSession denoise_session(const sync::SyncedSession& session,
                                    const DenoisePolicy& policy) {
  sync::SyncedSession out = session;
  const double fs = session.grid.rate;
  for (auto& [name, series] : out.numeric) {
    if (std::find(out.prefiltered.begin(), out.prefiltered.end(), name) != out.prefiltered.end()) {
      continue;
    }
    auto cls = classify_stream(name);
    auto it = cls ? policy.classes.find(*cls) : policy.classes.end();
    if (it == policy.classes.end()) {
      if (policy.strict) {
        throw Error(module_name::kDsp, "UnclassifiedChannel",
                    "stream '" + name + "' matches no denoise class");
      }
      out.warnings.push_back("stream '" + name + "' unclassified; passed through unfiltered");
      continue;
    }
    const ClassFilter& f = it->second;
    const double cutoff = effective_cutoff(f.cutoff, fs);
    if (cutoff != f.cutoff) {
      out.warnings.push_back("stream '" + name + "': cutoff " + std::to_string(f.cutoff) +
                             " Hz clamped to " + std::to_string(cutoff) + " Hz at " +
                             std::to_string(fs) + " Hz");
    }
    filter_series(series, design_butterworth_lowpass(f.order, cutoff, fs));
  }
  out.denoised = true;
  return out;
}

}  // namespace sessionforge::dsp
