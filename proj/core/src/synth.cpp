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

#include "sessionforge/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "json.hpp"
#include "sessionforge/error.hpp"
#include "sessionforge/rng.hpp"
#include "text_io.hpp"

namespace sessionforge::synth {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& detail) {
  throw Error(module_name::kSynth, "InvalidScenario", detail);
}

// Substream keys.
constexpr std::uint64_t kVideoStream = 1;  // + video index
constexpr std::uint64_t kEeNoise = 100;
constexpr std::uint64_t kWheelchairNoise = 101;
constexpr std::uint64_t kExtraNoise = 102;
constexpr std::uint64_t kAudioLoss = 200;
constexpr std::uint64_t kDialogue = 300;
constexpr std::uint64_t kVariation = 400;

constexpr int kAudioRate = 48000;

Point scaled(const Point& d, double k) { return {d[0] * k, d[1] * k, d[2] * k}; }

Point delta(const MotionProfile& p) {
  return {p.end[0] - p.start[0], p.end[1] - p.start[1], p.end[2] - p.start[2]};
}

double norm(const Point& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, 1e-13, 40);
}

// Points where the integrands stop being smooth: motion ends and, for the
// min-jerk profile, the zeros of the jerk polynomial.
std::vector<double> breakpoints(const MotionProfile& p, double a, double b) {
  std::vector<double> cuts{a, b};
  if (p.kind == ProfileKind::MinJerk) {
    const double r = 0.5 / std::sqrt(3.0);
    for (double s : {0.0, 0.5 - r, 0.5 + r, 1.0}) cuts.push_back(p.t0 + s * p.T);
  }
  std::vector<double> out;
  for (double c : cuts) {
    if (c >= a && c <= b) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double piecewise_integral(const MotionProfile& p, double a, double b,
                          const std::function<double(double)>& f) {
  const auto cuts = breakpoints(p, a, b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += adaptive_simpson(f, cuts[i], cuts[i + 1]);
  return total;
}

Point point_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || j.size() > 3) invalid(std::string(field) + " must be an array of 1-3 numbers");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) invalid(std::string(field) + " must be numeric");
    p[i] = j[i].get<double>();
  }
  return p;
}

MotionProfile profile_from_json(const json& j, const char* field) {
  if (!j.is_object()) invalid(std::string(field) + " must be an object");
  MotionProfile p;
  auto kind = parse_profile_kind(j.value("kind", std::string("stationary")));
  if (!kind) invalid(std::string(field) + ".kind must be min_jerk, cubic or stationary");
  p.kind = *kind;
  if (j.contains("start")) p.start = point_from_json(j["start"], "start");
  p.end = p.start;
  if (j.contains("end")) p.end = point_from_json(j["end"], "end");
  p.t0 = j.value("t0", 0.0);
  p.T = j.value("T", 1.0);
  return p;
}

json profile_to_json(const MotionProfile& p) {
  return {{"kind", std::string(to_string(p.kind))},
          {"start", p.start},
          {"end", p.end},
          {"t0", p.t0},
          {"T", p.T}};
}

void check_profile(const MotionProfile& p, const char* field) {
  if (!(p.T > 0.0) || !std::isfinite(p.T)) invalid(std::string(field) + ".T must be positive");
  if (!std::isfinite(p.t0)) invalid(std::string(field) + ".t0 must be finite");
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(p.start[i]) || !std::isfinite(p.end[i])) {
      invalid(std::string(field) + " endpoints must be finite");
    }
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t sample_count(double duration, double rate) {
  return static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
}

double noise_for(const Scenario& s, const std::string& stream) {
  auto it = s.noise_sd.find(stream);
  return it == s.noise_sd.end() ? 0.0 : it->second;
}

using dialogue::AmbiguityType;
using dialogue::Clarity;

dialogue::AmbiguityLabel specific() { return {Clarity::Specific, std::nullopt}; }
dialogue::AmbiguityLabel ambiguous(AmbiguityType t) { return {Clarity::Ambiguous, t}; }

// User prompts per task, each followed by a robot turn.
std::vector<std::pair<const char*, dialogue::AmbiguityLabel>> user_bank(Task task) {
  switch (task) {
    case Task::Cleaning:
      return {{"wipe over there", ambiguous(AmbiguityType::Spatial)},
              {"can you uh clean the the table", specific()},
              {"and play some music too", ambiguous(AmbiguityType::OutOfScope)},
              {"put the sponge far away from me", ambiguous(AmbiguityType::Spatial)},
              {"do it again", ambiguous(AmbiguityType::TemporalIncremental)}};
    case Task::DoorOpening:
      return {{"I want to go outside", ambiguous(AmbiguityType::IntentPragmatic)},
              {"open the door", specific()},
              {"it's stuffy in here", ambiguous(AmbiguityType::IntentPragmatic)},
              {"push it more", ambiguous(AmbiguityType::TemporalIncremental)}};
    case Task::DrawerOpening:
      return {{"open the top drawer", specific()},
              {"pull the drawer handle", specific()},
              {"a bit more", ambiguous(AmbiguityType::TemporalIncremental)},
              {"open the left drawer please", specific()}};
    case Task::Drinking:
      return {{"I'm thirsty", ambiguous(AmbiguityType::IntentPragmatic)},
              {"give me the cup", ambiguous(AmbiguityType::Referential)},
              {"bring the water bottle to my mouth", specific()},
              {"I need something to drink", ambiguous(AmbiguityType::IntentPragmatic)}};
    case Task::Feeding:
      return {{"I'm hungry", ambiguous(AmbiguityType::IntentPragmatic)},
              {"get me that one", ambiguous(AmbiguityType::Referential)},
              {"the the piece next to it", ambiguous(AmbiguityType::Referential)},
              {"feed me the apple slice", specific()},
              {"another one", ambiguous(AmbiguityType::TemporalIncremental)}};
  }
  return {};
}

constexpr std::array<const char*, 4> kRobotReplies = {
    "Which one do you mean?", "Okay, I will do that now.", "Could you tell me where exactly?",
    "Sorry, I can't do that. Is there anything else?"};

dialogue::AnnotatedDialogue make_dialogue(const Scenario& s, const std::string& trial_id) {
  SplitMix64 rng = SplitMix64::derive(s.seed, kDialogue);
  const auto bank = user_bank(s.task);
  const int user_turns = 2 + static_cast<int>(rng.next() % 3);
  const int n_turns = 2 * user_turns;
  const double slot = 0.9 * s.duration / n_turns;
  const double min_rate = *std::min_element(s.video_rates.begin(), s.video_rates.end());

  dialogue::AnnotatedDialogue d;
  d.trial_id = trial_id;
  d.task = s.task;
  for (int k = 0; k < n_turns; ++k) {
    dialogue::Utterance u;
    u.trial_id = trial_id;
    u.turn_index = k;
    u.t_start = 0.05 * s.duration + k * slot;
    u.t_end = u.t_start + 0.8 * slot;
    if (k % 2 == 0) {
      const auto& [text, label] = bank[rng.next() % bank.size()];
      u.speaker = dialogue::Speaker::User;
      u.text = text;
      d.labels[k] = label;
      d.frame_refs[k] = static_cast<long>(std::floor(u.t_start * min_rate));
    } else {
      u.speaker = dialogue::Speaker::Robot;
      u.text = kRobotReplies[rng.next() % kRobotReplies.size()];
    }
    d.turns.push_back(std::move(u));
  }
  return d;
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::MinJerk: return "min_jerk";
    case ProfileKind::Cubic: return "cubic";
    case ProfileKind::Stationary: return "stationary";
  }
  return "stationary";
}

std::optional<ProfileKind> parse_profile_kind(std::string_view s) {
  for (ProfileKind k : {ProfileKind::MinJerk, ProfileKind::Cubic, ProfileKind::Stationary}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

Point position(const MotionProfile& p, double t) {
  const Point d = delta(p);
  double f = 0.0;
  switch (p.kind) {
    case ProfileKind::Stationary: return p.start;
    case ProfileKind::MinJerk: {
      const double s = std::clamp((t - p.t0) / p.T, 0.0, 1.0);
      f = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
      break;
    }
    case ProfileKind::Cubic: {
      const double s = (t - p.t0) / p.T;
      f = s * s * s;
      break;
    }
  }
  return {p.start[0] + d[0] * f, p.start[1] + d[1] * f, p.start[2] + d[2] * f};
}

Point velocity(const MotionProfile& p, double t) {
  const double s = (t - p.t0) / p.T;
  switch (p.kind) {
    case ProfileKind::Stationary: return {0.0, 0.0, 0.0};
    case ProfileKind::MinJerk:
      if (s <= 0.0 || s >= 1.0) return {0.0, 0.0, 0.0};
      return scaled(delta(p), 30.0 * s * s * (1.0 - s) * (1.0 - s) / p.T);
    case ProfileKind::Cubic: return scaled(delta(p), 3.0 * s * s / p.T);
  }
  return {0.0, 0.0, 0.0};
}

Point jerk(const MotionProfile& p, double t) {
  const double s = (t - p.t0) / p.T;
  const double T3 = p.T * p.T * p.T;
  switch (p.kind) {
    case ProfileKind::Stationary: return {0.0, 0.0, 0.0};
    case ProfileKind::MinJerk:
      if (s < 0.0 || s > 1.0) return {0.0, 0.0, 0.0};
      return scaled(delta(p), (60.0 - 360.0 * s + 360.0 * s * s) / T3);
    case ProfileKind::Cubic: return scaled(delta(p), 6.0 / T3);
  }
  return {0.0, 0.0, 0.0};
}

double integrate_jerk_magnitude(const MotionProfile& p, double a, double b) {
  if (p.kind == ProfileKind::Stationary) return 0.0;
  return piecewise_integral(p, a, b, [&](double t) { return norm(jerk(p, t)); });
}

double integrate_speed(const MotionProfile& p, double a, double b) {
  if (p.kind == ProfileKind::Stationary) return 0.0;
  return piecewise_integral(p, a, b, [&](double t) { return norm(velocity(p, t)); });
}

void check_scenario(const Scenario& s) {
  if (!(s.duration > 0.0) || !std::isfinite(s.duration)) invalid("duration must be positive");
  if (s.video_rates.empty()) invalid("video_rates must not be empty");
  for (double r : s.video_rates) {
    if (!(r > 0.0) || !std::isfinite(r)) invalid("video rates must be positive");
  }
  if (!(s.numeric_rate > 0.0) || !std::isfinite(s.numeric_rate)) invalid("numeric_rate must be positive");
  if (!(s.timestamp_jitter_sd >= 0.0) || !std::isfinite(s.timestamp_jitter_sd)) {
    invalid("timestamp_jitter_sd must be non-negative");
  }
  for (const auto& [name, sd] : s.noise_sd) {
    if (!(sd >= 0.0) || !std::isfinite(sd)) invalid("noise_sd." + name + " must be non-negative");
  }
  if (!(s.udp_loss_rate >= 0.0 && s.udp_loss_rate < 1.0)) invalid("udp_loss_rate must be in [0, 1)");
  if (!(s.audio_tone_hz > 0.0 && s.audio_tone_hz < kAudioRate / 2.0)) invalid("audio_tone_hz out of range");
  check_profile(s.ee_profile, "ee_profile");
  check_profile(s.wheelchair_profile, "wheelchair_profile");
  if (s.success ? *s.success != s.flags.empty() : !s.flags.empty()) {
    invalid("success must be true iff flags is empty");
  }
}

Scenario scenario_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("scenario must be a JSON object");
  Scenario s;
  try {
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("task")) {
      auto t = parse_task(j["task"].get<std::string>());
      if (!t) invalid("unknown task '" + j["task"].get<std::string>() + "'");
      s.task = *t;
    }
    s.session_id = j.value("session_id", std::string());
    s.participant_id = j.value("participant_id", s.participant_id);
    s.created_at = j.value("created_at", s.created_at);
    s.duration = j.value("duration", s.duration);
    if (j.contains("ee_profile")) s.ee_profile = profile_from_json(j["ee_profile"], "ee_profile");
    if (j.contains("wheelchair_profile")) {
      s.wheelchair_profile = profile_from_json(j["wheelchair_profile"], "wheelchair_profile");
    }
    if (j.contains("video_rates")) s.video_rates = j["video_rates"].get<std::vector<double>>();
    s.numeric_rate = j.value("numeric_rate", s.numeric_rate);
    s.timestamp_jitter_sd = j.value("timestamp_jitter_sd", s.timestamp_jitter_sd);
    if (j.contains("noise_sd")) s.noise_sd = j["noise_sd"].get<std::map<std::string, double>>();
    s.udp_loss_rate = j.value("udp_loss_rate", s.udp_loss_rate);
    s.audio = j.value("audio", s.audio);
    s.audio_tone_hz = j.value("audio_tone_hz", s.audio_tone_hz);
    s.dialogue = j.value("dialogue", s.dialogue);
    s.extra_streams = j.value("extra_streams", s.extra_streams);
    if (j.contains("success")) {
      s.success = j["success"].is_null() ? std::nullopt : std::optional<bool>(j["success"].get<bool>());
    }
    if (j.contains("flags")) s.flags = j["flags"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    invalid(std::string("scenario field has the wrong type: ") + e.what());
  }
  check_scenario(s);
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["seed"] = s.seed;
  j["task"] = std::string(to_string(s.task));
  j["session_id"] = s.session_id;
  j["participant_id"] = s.participant_id;
  j["created_at"] = s.created_at;
  j["duration"] = s.duration;
  j["ee_profile"] = profile_to_json(s.ee_profile);
  j["wheelchair_profile"] = profile_to_json(s.wheelchair_profile);
  j["video_rates"] = s.video_rates;
  j["numeric_rate"] = s.numeric_rate;
  j["timestamp_jitter_sd"] = s.timestamp_jitter_sd;
  j["noise_sd"] = s.noise_sd;
  j["udp_loss_rate"] = s.udp_loss_rate;
  j["audio"] = s.audio;
  j["audio_tone_hz"] = s.audio_tone_hz;
  j["dialogue"] = s.dialogue;
  j["extra_streams"] = s.extra_streams;
  j["success"] = s.success ? json(*s.success) : json(nullptr);
  j["flags"] = s.flags;
  return j.dump(2) + "\n";
}

std::string ground_truth_json(const GroundTruth& t) {
  json j;
  j["duration"] = t.duration;
  j["ee_mean_jerk"] = t.ee_mean_jerk;
  j["ee_path_length"] = t.ee_path_length;
  j["wheelchair_mean_jerk"] = t.wheelchair_mean_jerk;
  j["wheelchair_path_length"] = t.wheelchair_path_length;
  j["ee_profile"] = profile_to_json(t.ee_profile);
  j["wheelchair_profile"] = profile_to_json(t.wheelchair_profile);
  return j.dump(2) + "\n";
}

MinJerkTrajectory gen_min_jerk_trajectory(const Point& p0, const Point& pf, double T, double fs) {
  if (!(T > 0.0) || !std::isfinite(T)) invalid("T must be positive");
  if (!(fs > 0.0) || !std::isfinite(fs)) invalid("fs must be positive");
  MotionProfile p{ProfileKind::MinJerk, p0, pf, 0.0, T};
  MinJerkTrajectory out;
  out.duration = T;
  const std::size_t n = sample_count(T, fs);
  out.timestamps.reserve(n);
  out.positions.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    out.timestamps.push_back(t);
    out.positions.push_back(position(p, t));
  }
  out.mean_jerk = integrate_jerk_magnitude(p, 0.0, T) / T;
  out.path_length = integrate_speed(p, 0.0, T);
  return out;
}

Generated gen_session(const Scenario& scenario) {
  check_scenario(scenario);
  const Scenario& s = scenario;
  Generated g;
  RawSession& session = g.session;
  SessionManifest& m = session.manifest;
  m.session_id = s.session_id.empty() ? "synth-" + std::to_string(s.seed) : s.session_id;
  m.participant_id = s.participant_id;
  m.task = std::string(to_string(s.task));
  m.success = s.success;
  m.flags = s.flags;
  m.created_at = s.created_at;
  m.notes = "synthetic session, seed " + std::to_string(s.seed);

  MotionProfile wheel = s.wheelchair_profile;
  wheel.start[2] = 0.0;
  wheel.end[2] = 0.0;

  // Frame logs.
  for (std::size_t i = 0; i < s.video_rates.size(); ++i) {
    const double rate = s.video_rates[i];
    StreamDescriptor d;
    d.name = "camera_" + std::to_string(i);
    d.kind = StreamKind::VideoFrames;
    d.nominal_rate = rate;
    d.channels = {{"frame", "1"}};
    d.file = "video/" + d.name + ".avi";
    m.streams.push_back(d);

    SplitMix64 rng = SplitMix64::derive(s.seed, kVideoStream + i);
    const double bound = 0.45 / rate;
    FrameTimestampLog log{d.name, {}};
    const std::size_t n = sample_count(s.duration, rate);
    log.timestamps.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      double jitter = s.timestamp_jitter_sd > 0.0 ? rng.normal(0.0, s.timestamp_jitter_sd) : 0.0;
      jitter = std::clamp(jitter, -bound, bound);
      if (k == 0) jitter = std::abs(jitter);  // nothing before t = 0
      log.timestamps.push_back(static_cast<double>(k) / rate + jitter);
    }
    session.video.emplace(d.name, std::move(log));
  }

  const std::size_t n_numeric = sample_count(s.duration, s.numeric_rate);
  auto add_numeric = [&](const std::string& name, std::vector<Channel> channels,
                         const std::function<std::vector<double>(double)>& sample,
                         std::size_t noisy_channels, std::uint64_t noise_key) {
    StreamDescriptor d;
    d.name = name;
    d.kind = StreamKind::Numeric;
    d.nominal_rate = s.numeric_rate;
    d.channels = channels;
    d.file = "streams/" + name + ".csv";
    m.streams.push_back(d);

    const double sd = noise_for(s, name);
    SplitMix64 rng = SplitMix64::derive(s.seed, noise_key);
    TimedSeries series(std::move(channels));
    for (std::size_t k = 0; k < n_numeric; ++k) {
      const double t = static_cast<double>(k) / s.numeric_rate;
      std::vector<double> row = sample(t);
      if (sd > 0.0) {
        for (std::size_t c = 0; c < noisy_channels; ++c) row[c] += rng.normal(0.0, sd);
      }
      series.append(t, row);
    }
    session.numeric.emplace(name, std::move(series));
  };

  add_numeric(std::string(metrics::kEeStream),
              {{"x", "m"}, {"y", "m"}, {"z", "m"}, {"qx", "1"}, {"qy", "1"}, {"qz", "1"}, {"qw", "1"}},
              [&](double t) {
                const Point p = position(s.ee_profile, t);
                return std::vector<double>{p[0], p[1], p[2], 0.0, 0.0, 0.0, 1.0};
              },
              3, kEeNoise);
  add_numeric(std::string(metrics::kWheelchairStream), {{"x", "m"}, {"y", "m"}, {"theta", "rad"}},
              [&](double t) {
                const Point p = position(wheel, t);
                return std::vector<double>{p[0], p[1], 0.0};
              },
              2, kWheelchairNoise);
  if (s.extra_streams) {
    add_numeric("arm_joints",
                {{"j1", "rad"}, {"j2", "rad"}, {"j3", "rad"}, {"j4", "rad"}, {"j5", "rad"}, {"j6", "rad"}},
                [&](double t) {
                  std::vector<double> row(6);
                  for (int i = 0; i < 6; ++i) row[i] = 0.3 * std::sin(2.0 * std::numbers::pi * 0.2 * t + i);
                  return row;
                },
                6, kExtraNoise);
    add_numeric("imu",
                {{"ax", "m/s^2"}, {"ay", "m/s^2"}, {"az", "m/s^2"},
                 {"gx", "rad/s"}, {"gy", "rad/s"}, {"gz", "rad/s"}},
                [](double) { return std::vector<double>{0.0, 0.0, 9.81, 0.0, 0.0, 0.0}; },
                6, kExtraNoise + 1);
  }

  if (s.audio) {
    StreamDescriptor d;
    d.name = "audio";
    d.kind = StreamKind::Audio;
    d.nominal_rate = kAudioRate;
    d.channels = {{"pcm", "1"}};
    d.file = "audio/audio.wav";
    m.streams.push_back(d);

    const auto chunks = static_cast<std::size_t>(std::floor(s.duration * kAudioRate / kAudioChunkSamples));
    SplitMix64 rng = SplitMix64::derive(s.seed, kAudioLoss);
    std::vector<std::int16_t> chunk(kAudioChunkSamples);
    for (std::size_t c = 0; c < chunks; ++c) {
      for (std::size_t i = 0; i < kAudioChunkSamples; ++i) {
        const double n = static_cast<double>(c * kAudioChunkSamples + i);
        chunk[i] = static_cast<std::int16_t>(
            std::lround(3000.0 * std::sin(2.0 * std::numbers::pi * s.audio_tone_hz * n / kAudioRate)));
      }
      wire::AudioDatagram dg;
      dg.sequence = static_cast<std::uint32_t>(c);
      dg.timestamp = static_cast<double>(c * kAudioChunkSamples) / kAudioRate;
      dg.pcm = wire::pcm_to_bytes(chunk);
      const bool lost = rng.uniform() < s.udp_loss_rate;
      if (lost) {
        g.audio.lost.insert(dg.sequence);
      } else {
        g.audio.delivered.push_back(dg);
      }
      g.audio.sent.push_back(std::move(dg));
    }
    wire::ReassemblyOptions options;
    options.stream = d.name;
    options.expected_count = chunks;
    options.chunk_bytes = kAudioChunkSamples * 2;
    AudioTrack track;
    track.meta.sample_rate = kAudioRate;
    track.meta.file = d.file;
    track.samples = wire::audio_reassemble(g.audio.delivered, options).pcm;
    session.audio.emplace(d.name, std::move(track));
  }

  if (s.dialogue) session.dialogue = make_dialogue(s, m.session_id);

  GroundTruth& t = g.truth;
  t.duration = s.duration;
  t.ee_profile = s.ee_profile;
  t.wheelchair_profile = wheel;
  t.ee_mean_jerk = integrate_jerk_magnitude(s.ee_profile, 0.0, s.duration) / s.duration;
  t.ee_path_length = integrate_speed(s.ee_profile, 0.0, s.duration);
  t.wheelchair_mean_jerk = integrate_jerk_magnitude(wheel, 0.0, s.duration) / s.duration;
  t.wheelchair_path_length = integrate_speed(wheel, 0.0, s.duration);
  return g;
}

void write_generated(const Generated& g, const Scenario& scenario, const fs::path& dir) {
  save_session(g.session, dir);
  detail::write_file(dir / "ground_truth.json", ground_truth_json(g.truth), module_name::kSynth);
  detail::write_file(dir / "scenario.json", scenario_to_json(scenario), module_name::kSynth);
}

std::vector<Scenario> expand_dataset(const Scenario& base, int count) {
  if (count < 1) invalid("count must be at least 1");
  check_scenario(base);
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    Scenario s = base;
    s.seed = base.seed + static_cast<std::uint64_t>(i);
    s.task = kAllTasks[static_cast<std::size_t>(i) % kAllTasks.size()];
    char id[64];
    std::snprintf(id, sizeof id, "trial-%03d-%s", i, lower(to_string(s.task)).c_str());
    s.session_id = id;
    SplitMix64 rng = SplitMix64::derive(s.seed, kVariation);
    auto vary = [&](MotionProfile& p) {
      const double scale = 0.8 + 0.4 * rng.uniform();
      for (int a = 0; a < 3; ++a) p.end[a] = p.start[a] + (p.end[a] - p.start[a]) * scale;
      p.T *= 0.9 + 0.2 * rng.uniform();
      if (p.kind == ProfileKind::MinJerk && p.t0 + p.T > s.duration) p.T = s.duration - p.t0;
    };
    vary(s.ee_profile);
    vary(s.wheelchair_profile);
    // The wheelchair is only repositioned for door opening.
    if (s.task != Task::DoorOpening) s.wheelchair_profile.kind = ProfileKind::Stationary;
    check_scenario(s);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sessionforge::synth
