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

#ifndef SESSIONFORGE_FILTER_HPP_
#define SESSIONFORGE_FILTER_HPP_

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/session.hpp"
#include "sessionforge/sync.hpp"

namespace sessionforge::dsp {

// Digital IIR low-pass, transfer function b(z) / a(z) with a[0] = 1.
struct FilterSpec {
  int order = 0;
  double cutoff = 0.0;       // Hz
  double sample_rate = 0.0;  // Hz
  std::vector<double> b;
  std::vector<double> a;
};

// Butterworth low-pass from the analog prototype poles, mapped through the
// bilinear transform with the cutoff prewarped so that |H| = 1/sqrt(2)
// exactly at `cutoff`. Errors: InvalidOrder, InvalidCutoff.
FilterSpec design_butterworth_lowpass(int order, double cutoff, double sample_rate);

std::complex<double> frequency_response(const FilterSpec& spec, double frequency);

// Steady-state state vector of the transposed direct form for a unit step.
std::vector<double> step_initial_state(const FilterSpec& spec);

// Single causal pass (transposed direct form II). `initial_state` defaults
// to zeros.
std::vector<double> lfilter(const FilterSpec& spec, std::span<const double> x,
                            std::span<const double> initial_state = {});

inline int filtfilt_padding(int order) { return 3 * (order + 1); }

// Zero-phase filtering: odd reflection padding of 3 * (order + 1) samples at
// each end (shortened to length - 1 for short signals), then the mean of a
// forward-backward and a backward-forward pass, each pass starting from
// steady-state initial conditions; padding trimmed afterwards. Errors: SignalTooShort when
// length <= 3 * order.
std::vector<double> filtfilt(const FilterSpec& spec, std::span<const double> x);

enum class ChannelClass { EEPose, ArmJoints, WheelchairWheels, IMU };

std::string_view to_string(ChannelClass c);
std::optional<ChannelClass> parse_channel_class(std::string_view s);

// ee* -> EEPose, arm* / joint* -> ArmJoints, wheel* -> WheelchairWheels,
// imu* -> IMU (case-insensitive prefixes of the stream name).
std::optional<ChannelClass> classify_stream(std::string_view stream_name);

struct ClassFilter {
  int order = 4;
  double cutoff = 5.0;

  bool operator==(const ClassFilter&) const = default;
};

struct DenoisePolicy {
  std::map<ChannelClass, ClassFilter> classes;
  bool strict = true;  // unclassified streams are an error rather than passed through

  // 4th order; 5 Hz for pose, arm joints and wheels; 10 Hz for the IMU.
  static DenoisePolicy standard();
  bool operator==(const DenoisePolicy&) const = default;
};

// {"EEPose": {"order": 4, "cutoff": 5}, ..., "strict": true}
DenoisePolicy policy_from_json(std::string_view text);
std::string policy_to_json(const DenoisePolicy& policy);

// Cutoff actually usable at `sample_rate`: cutoffs at or above Nyquist are
// clamped to 0.45 * sample_rate.
double effective_cutoff(double cutoff, double sample_rate);

// Streams whose class cutoff cannot be realised at the grid rate are
// filtered at their native rate here, before interpolation, when the native
// rate is above twice the cutoff. Names of filtered streams are appended to
// `prefiltered`.
RawSession prefilter_native(const RawSession& session, const DenoisePolicy& policy,
                            double grid_rate, std::vector<std::string>& prefiltered,
                            std::vector<std::string>& warnings);

// Filters every numeric channel at the grid rate with its class's filter;
// streams already prefiltered are left alone; frame selections and
// timestamps are untouched. Errors: UnclassifiedChannel (strict policy),
// SignalTooShort.
sync::SyncedSession denoise_session(const sync::SyncedSession& session,
                                    const DenoisePolicy& policy);

}  // namespace sessionforge::dsp

#endif  // SESSIONFORGE_FILTER_HPP_
