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

// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sessionforge/curation.hpp"
#include "sessionforge/dialogue.hpp"
#include "sessionforge/filter.hpp"
#include "sessionforge/metrics.hpp"
#include "sessionforge/recorder.hpp"
#include "sessionforge/rng.hpp"
#include "sessionforge/sync.hpp"
#include "sessionforge/synth.hpp"
#include "sessionforge/wire.hpp"
#include "test_support.hpp"

#ifdef SESSIONFORGE_HAVE_CLI
#include "cli.hpp"
#include "report.hpp"
#endif

namespace sf = sessionforge;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1 -------------------------------------------------------------------------
Verdict sync_oracle_equivalence() {
  Verdict v;
  sf::SplitMix64 rng(20260101);
  std::size_t points = 0;
  std::size_t agree = 0;
  double seconds = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const double rate = 5.0 + 55.0 * rng.uniform();
    const double jitter = 0.020 * rng.uniform();
    const auto log = sf::oracle::fuzz_frame_log(rng, rate, jitter, 0.0, 5.0 + 10.0 * rng.uniform());
    const double grid_rate = 5.0 + 55.0 * rng.uniform();
    const auto grid = sf::sync::build_reference_grid({log.timestamps.front(), log.timestamps.back()}, grid_rate);
    const double tau = 0.5 / grid_rate;
    const auto t0 = std::chrono::steady_clock::now();
    const auto got = sf::sync::match_frames(log, grid, tau);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto want = sf::oracle::brute_force_match(log, grid, tau);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ++points;
      if (got.selected_indices[k] == want.selected_indices[k] && got.accepted[k] == want.accepted[k]) ++agree;
    }
  }
  v.check(agree == points, "index agreement");
  v.check(seconds < 10.0, "runtime");
  v.note(std::to_string(agree) + "/" + std::to_string(points) + " grid points agree, " +
         fmt("%.3f s", seconds));
  return v;
}

// 2 -------------------------------------------------------------------------
Verdict tolerance_semantics() {
  Verdict v;
  sf::SplitMix64 rng(7);
  bool repeats = true;
  for (int c = 0; c < 100; ++c) {
    const double rate = 5.0 + 55.0 * rng.uniform();
    const double offset = (0.05 + 0.4 * rng.uniform()) / rate;
    auto log = sf::oracle::fuzz_frame_log(rng, rate, 0.0, 0.0, 4.0);
    for (auto& t : log.timestamps) t += offset;
    const auto grid = sf::sync::build_reference_grid({0.0, 4.0}, rate);
    const auto sel = sf::sync::match_frames(log, grid, 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      repeats = repeats && sel.selected_indices[k] == sel.selected_indices[k - 1] && !sel.accepted[k];
    }
  }
  v.check(repeats, "tau = 0 repeats the prior index");

  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sf::synth::Scenario sc;
    sc.seed = seed;
    sc.audio = false;
    sc.timestamp_jitter_sd = 0.0;
    const auto synced = sf::sync::sync_session(sf::synth::gen_session(sc).session);
    for (const auto& sel : synced.selections) worst = std::min(worst, sel.acceptance_rate());
  }
  v.check(worst == 1.0, "zero-jitter acceptance");
  v.note(fmt("lowest acceptance at half period %.4f", worst));
  return v;
}

// 3 -------------------------------------------------------------------------
Verdict filter_correctness() {
  Verdict v;
  const auto spec = sf::dsp::design_butterworth_lowpass(4, 5.0, 100.0);
  const double db = 20.0 * std::log10(std::abs(sf::dsp::frequency_response(spec, 5.0)));
  v.check(std::abs(db - 20.0 * std::log10(std::numbers::sqrt2 / 2)) <= 0.01, "gain at cutoff");
  double sb = 0.0;
  double sa = 0.0;
  for (double x : spec.b) sb += x;
  for (double x : spec.a) sa += x;
  v.check(std::abs(sb / sa - 1.0) <= 1e-9, "DC gain");

  std::vector<double> x;
  for (int n = 0; n < 2000; ++n) x.push_back(std::sin(2 * std::numbers::pi * 20.0 * n / 100.0));
  const auto y = sf::dsp::filtfilt(spec, x);
  double peak = 0.0;
  for (std::size_t i = 500; i < 1500; ++i) peak = std::max(peak, std::abs(y[i]));
  v.check(peak <= 1e-4, "20 Hz attenuation");

  sf::SplitMix64 rng(3);
  double asym = 0.0;
  for (int c = 0; c < 50; ++c) {
    std::vector<double> s(40 + 20 * c);
    for (auto& e : s) e = rng.normal();
    auto r = s;
    std::reverse(r.begin(), r.end());
    auto yr = sf::dsp::filtfilt(spec, r);
    std::reverse(yr.begin(), yr.end());
    const auto ys = sf::dsp::filtfilt(spec, s);
    for (std::size_t i = 0; i < ys.size(); ++i) asym = std::max(asym, std::abs(ys[i] - yr[i]));
  }
  v.check(asym <= 1e-9, "time-reversal symmetry");
  v.note(fmt("cutoff gain %.5f dB, DC gain - 1 = %.1e", db, sb / sa - 1.0));
  v.note(fmt("20 Hz residual %.2e, reversal mismatch %.1e", peak, asym));
  return v;
}

// 4 -------------------------------------------------------------------------
Verdict jerk_exactness() {
  Verdict v;
  double worst_ratio = 0.0;
  for (double dt : {1.0, 0.25, 1.0 / 12.0, 0.01, 1e-3}) {
    std::vector<sf::metrics::Point> p;
    double pmax = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double t = k * dt;
      p.push_back({t * t * t, 0.0, 0.0});
      pmax = std::max(pmax, t * t * t);
    }
    const double mean = sf::metrics::trial_mean_jerk(sf::metrics::jerk_series(p, dt));
    // Rounding bound of the four-point stencil: 8 * eps * max|p| / dt^3.
    const double bound = 8.0 * std::numeric_limits<double>::epsilon() * pmax / (dt * dt * dt) +
                         4.0 * std::numeric_limits<double>::epsilon() * 6.0;
    worst_ratio = std::max(worst_ratio, std::abs(mean - 6.0) / bound);
  }
  v.check(worst_ratio <= 1.0, "cubic mean jerk at machine precision");

  const double fs = 12.0;
  const auto traj = sf::synth::gen_min_jerk_trajectory({0, 0, 0}, {1, 0, 0}, 2.0, fs);
  const double got = sf::metrics::trial_mean_jerk(sf::metrics::jerk_series(traj.positions, 1.0 / fs));
  const double truth = sf::oracle::min_jerk_mean_jerk(1.0, 2.0);
  const double err = rel_err(got, truth);
  v.check(err <= 0.05, "min-jerk within 5%");
  v.note(fmt("cubic error / rounding bound %.3f", worst_ratio));
  v.note(fmt("min-jerk 12 Hz: %.6f vs %.6f", got, truth) + fmt(" (%.2f%%)", 100.0 * err));
  return v;
}

// 5 -------------------------------------------------------------------------
Verdict end_to_end_recovery() {
  Verdict v;
  sf::synth::Scenario sc;
  sc.seed = 5;
  sc.timestamp_jitter_sd = 0.005;
  sc.noise_sd = {{"ee_pose", 0.01}, {"wheelchair", 0.01}};
  sc.audio = false;
  const auto g = sf::synth::gen_session(sc);
  std::vector<std::string> pre;
  std::vector<std::string> warnings;
  const double grid_rate = sf::sync::reference_rate(g.session);
  const auto raw = sf::dsp::prefilter_native(g.session, sf::dsp::DenoisePolicy::standard(), grid_rate, pre, warnings);
  auto synced = sf::sync::sync_session(raw);
  synced.prefiltered = pre;
  const auto clean = sf::dsp::denoise_session(synced, sf::dsp::DenoisePolicy::standard());
  const auto m = sf::metrics::compute_trial_metrics(clean);
  const double e_path = rel_err(m.ee_path_length, g.truth.ee_path_length);
  const double e_jerk = rel_err(m.ee_mean_jerk, g.truth.ee_mean_jerk);
  const double e_chair = rel_err(m.wheelchair_mean_jerk, g.truth.wheelchair_mean_jerk);
  v.check(e_path <= 0.02, "EE path length within 2%");
  v.check(e_jerk <= 0.05, "EE mean jerk within 5%");
  v.check(e_chair <= 0.05, "wheelchair mean jerk within 5%");
  v.note(fmt("EE path %.4f vs %.4f", m.ee_path_length, g.truth.ee_path_length));
  v.note(fmt("EE jerk %.4f vs %.4f", m.ee_mean_jerk, g.truth.ee_mean_jerk));
  v.note(fmt("wheelchair jerk %.4f vs %.4f", m.wheelchair_mean_jerk, g.truth.wheelchair_mean_jerk));
  {
    auto quiet = sc;
    quiet.noise_sd.clear();
    const auto q = sf::synth::gen_session(quiet);
    const auto qm = sf::metrics::compute_trial_metrics(
        sf::dsp::denoise_session(sf::sync::sync_session(q.session), sf::dsp::DenoisePolicy::standard()));
    v.note(fmt("same session without noise: path %.2f%%, EE jerk %.2f%%", 100.0 * rel_err(qm.ee_path_length, q.truth.ee_path_length),
               100.0 * rel_err(qm.ee_mean_jerk, q.truth.ee_mean_jerk)));
  }

#ifdef SESSIONFORGE_HAVE_CLI
  sf::testing::TempDir dir;
  std::ostringstream sink;
  bool ran = true;
  ran = ran && sf::cli::run({"synth", "--seed", "5", "--count", "5", "--out", (dir / "ds").string()}, sink, sink) == 0;
  for (const char* out : {"run1", "run2"}) {
    ran = ran && sf::cli::run({"--root", (dir / "ds").string(), "pipeline", "--out", (dir / out).string()}, sink,
                              sink) == 0;
  }
  v.check(ran, "pipeline runs");
  std::size_t files = 0;
  bool identical = ran;
  if (ran) {
    for (const auto& e : std::filesystem::directory_iterator(dir / "run1")) {
      if (!e.is_regular_file()) continue;
      ++files;
      identical = identical && slurp(e.path()) == slurp(dir / "run2" / e.path().filename());
    }
  }
  v.check(identical && files > 0, "byte-identical reports");
  v.note(std::to_string(files) + " report files compared");
#else
  const auto again = sf::metrics::compute_trial_metrics(
      sf::dsp::denoise_session(synced, sf::dsp::DenoisePolicy::standard()));
  v.check(again.ee_mean_jerk == m.ee_mean_jerk && again.ee_path_length == m.ee_path_length &&
              again.wheelchair_mean_jerk == m.wheelchair_mean_jerk,
          "deterministic metrics");
#endif
  return v;
}

// 6 -------------------------------------------------------------------------
Verdict table_reproduction() {
  Verdict v;
  const std::vector<std::tuple<sf::Task, int, int>> counts{{sf::Task::Cleaning, 9, 4},
                                                           {sf::Task::DoorOpening, 16, 15},
                                                           {sf::Task::DrawerOpening, 17, 16},
                                                           {sf::Task::Drinking, 11, 9},
                                                           {sf::Task::Feeding, 13, 9}};
  std::vector<sf::SessionManifest> manifests;
  for (const auto& [task, raw, ok] : counts) {
    for (int i = 0; i < raw; ++i) {
      sf::SessionManifest m;
      m.session_id = std::string(sf::to_string(task)) + "-" + std::to_string(i);
      m.participant_id = "P01";
      m.task = std::string(sf::to_string(task));
      m.created_at = "2026-01-01T00:00:00Z";
      std::vector<sf::curation::ViolationFlag> flags;
      if (i >= ok) flags.push_back(sf::curation::parse_flag("ObjectDrop"));
      sf::curation::apply_label(m, flags);
      manifests.push_back(m);
    }
  }
  const auto stats = sf::curation::dataset_stats(manifests);
  v.check(stats.total_raw == 66 && stats.total_successful == 53, "totals");
  v.check(stats.percentage_text() == "80.30", "percentage text");
  for (const auto& [task, raw, ok] : counts) {
    const auto& c = stats.per_task.at(task);
    v.check(c.raw == static_cast<std::size_t>(raw) && c.successful == static_cast<std::size_t>(ok),
            std::string(sf::to_string(task)));
  }
  v.note("totals " + std::to_string(stats.total_raw) + "/" + std::to_string(stats.total_successful) + ", " +
         stats.percentage_text() + "%");
  return v;
}

// 7 -------------------------------------------------------------------------
sockaddr_in loopback(std::uint16_t port) {
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_port = htons(port);
  a.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return a;
}

bool send_all(std::uint16_t port, const sf::wire::Bytes& bytes) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  auto a = loopback(port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&a), sizeof a) != 0) {
    ::close(fd);
    return false;
  }
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n <= 0) break;
    off += static_cast<std::size_t>(n);
  }
  ::close(fd);
  return off == bytes.size();
}

Verdict transport_integrity() {
  Verdict v;
  sf::testing::TempDir dir;
  sf::RecorderConfig config;
  config.session_root = dir / "session";
  config.udp_port.reset();
  config.manifest_template.session_id = "acceptance";
  config.manifest_template.participant_id = "P01";
  config.manifest_template.task = "Feeding";
  const std::vector<std::string> topics{"ee_pose", "wheelchair", "arm_joints", "imu", "gripper"};
  for (const auto& t : topics) {
    sf::StreamDescriptor d;
    d.name = t;
    d.kind = sf::StreamKind::Numeric;
    d.nominal_rate = 100.0;
    d.channels = {{"a", "1"}, {"b", "1"}};
    config.streams[t] = d;
  }
  auto handle = sf::start_recording(config);
  std::map<std::string, std::vector<sf::wire::TcpFrame>> sent;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    for (int k = 0; k < 2000; ++k) {
      sent[topics[i]].push_back({topics[i], 0.01 * k + 1e-4 * static_cast<double>(i), {1.0 * k, -1.0 * k}});
    }
  }
  std::vector<std::thread> senders;
  std::vector<char> ok(topics.size(), 0);
  for (std::size_t i = 0; i < topics.size(); ++i) {
    senders.emplace_back([&, i] {
      sf::wire::Bytes batch;
      for (const auto& f : sent[topics[i]]) sf::wire::encode_frame_into(f, batch);
      ok[i] = send_all(handle.tcp_port(), batch) ? 1 : 0;
    });
  }
  for (auto& t : senders) t.join();
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(30);
  while (handle.stats().frames_recorded < 10000 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  const auto session = handle.stop();
  bool fifo = true;
  std::size_t rows = 0;
  for (const auto& t : topics) {
    const auto& s = session.numeric.at(t);
    rows += s.size();
    if (s.size() != sent[t].size()) {
      fifo = false;
      continue;
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      fifo = fifo && s.value(k, 0) == sent[t][k].values[0] && s.value(k, 1) == sent[t][k].values[1];
    }
  }
  v.check(std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; }), "senders delivered");
  v.check(rows == 10000 && handle.stats().frames_malformed == 0, "zero TCP loss");
  v.check(fifo, "per-topic FIFO order");
  v.note(std::to_string(rows) + " TCP frames recorded");

  std::size_t lost_total = 0;
  bool gaps_exact = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sf::synth::Scenario sc;
    sc.seed = seed;
    sc.udp_loss_rate = 0.01;
    sc.duration = 30.0;
    const auto g = sf::synth::gen_session(sc);
    sf::wire::ReassemblyOptions opts;
    opts.expected_count = g.audio.sent.size();
    const auto r = sf::wire::audio_reassemble(g.audio.delivered, opts);
    std::set<std::uint32_t> reported;
    for (const auto& range : r.gaps.missing_sequences) {
      for (std::uint32_t s = range.first; s <= range.last; ++s) reported.insert(s);
    }
    gaps_exact = gaps_exact && reported == g.audio.lost && r.gaps.expected == g.audio.sent.size();
    lost_total += g.audio.lost.size();
  }
  v.check(gaps_exact && lost_total > 0, "UDP gaps equal injected loss");
  v.note(std::to_string(lost_total) + " injected UDP losses over 5 seeds");
  return v;
}

// 8 -------------------------------------------------------------------------
Verdict dialogue_round_trip() {
  using namespace sf::dialogue;
  Verdict v;
  sf::SplitMix64 rng(808);
  const std::vector<std::string> pieces{"I'm thirsty", "Place it far away from me", "\n", "\"", "\\", "\t",
                                        "caf\xc3\xa9", "\xe2\x98\x95", "\xf0\x9f\xa4\x96", "uh", " ", "{}"};
  std::vector<AnnotatedDialogue> ds;
  for (int i = 0; i < 100; ++i) {
    AnnotatedDialogue d;
    d.trial_id = "trial-" + std::to_string(i);
    d.task = sf::kAllTasks[static_cast<std::size_t>(rng.uniform() * 5)];
    const int turns = 1 + static_cast<int>(rng.uniform() * 8);
    double t = 0.0;
    for (int k = 0; k < turns; ++k) {
      std::string text;
      const int n = static_cast<int>(rng.uniform() * 6);
      for (int j = 0; j < n; ++j) text += pieces[static_cast<std::size_t>(rng.uniform() * pieces.size())];
      const Speaker sp = k % 2 == 0 ? Speaker::User : Speaker::Robot;
      d.turns.push_back({sp, text, t, t + 0.5 + rng.uniform(), d.trial_id, k});
      t += 2.0;
      if (sp == Speaker::User && rng.uniform() < 0.8) {
        const auto col = static_cast<std::size_t>(rng.uniform() * 6);
        d = annotate_utterance(d, k, col == 0 ? AmbiguityLabel{Clarity::Specific, std::nullopt}
                                              : AmbiguityLabel{Clarity::Ambiguous, kAllAmbiguityTypes[col - 1]});
        if (rng.uniform() < 0.5) d.frame_refs[k] = static_cast<long>(24.0 * t);
      }
    }
    ds.push_back(std::move(d));
  }
  const auto text = export_jsonl(ds);
  v.check(std::count(text.begin(), text.end(), '\n') == 100, "one line per record");
  v.check(import_jsonl(text) == ds, "value-equal round trip");

  AnnotatedDialogue probe;
  probe.trial_id = "probe";
  probe.turns = {{Speaker::User, "hand me that", 0.0, 1.0, "probe", 0}, {Speaker::Robot, "ok", 1.0, 2.0, "probe", 1}};
  std::size_t rejected = 0;
  std::size_t invalid = 0;
  auto expect_reject = [&](const std::function<void()>& fn, const std::string& code) {
    ++invalid;
    if (sf::testing::error_mismatch(fn, "dialogue_annotations", code).empty()) ++rejected;
  };
  for (auto type : kAllAmbiguityTypes) {
    expect_reject([&] { annotate_utterance(probe, 0, {Clarity::Specific, type}); }, "LabelSchemaViolation");
    expect_reject([&] { check_label({Clarity::Specific, type}); }, "LabelSchemaViolation");
  }
  expect_reject([&] { annotate_utterance(probe, 0, {Clarity::Ambiguous, std::nullopt}); }, "LabelSchemaViolation");
  expect_reject([&] { check_label({Clarity::Ambiguous, std::nullopt}); }, "LabelSchemaViolation");
  expect_reject([&] { annotate_utterance(probe, 1, {Clarity::Specific, std::nullopt}); }, "NotUserTurn");
  auto good = annotate_utterance(probe, 0, {Clarity::Ambiguous, AmbiguityType::Referential});
  const std::vector<AnnotatedDialogue> one{good};
  auto line = export_jsonl(one);
  const auto pos = line.find("\"Ambiguous\"");
  line.replace(pos, 11, "\"Specific\"");
  expect_reject([&] { import_jsonl(line); }, "LabelSchemaViolation");
  v.check(rejected == invalid, "invalid labels rejected");
  v.note("100 dialogues round-tripped, " + std::to_string(rejected) + "/" + std::to_string(invalid) +
         " invalid label cases rejected");
  return v;
}

// 9 -------------------------------------------------------------------------
Verdict survey_stats() {
  Verdict v;
  std::map<std::string, std::vector<int>> responses{
      {"q1_enjoyment", {5, 5, 5, 4, 2}}, {"q2_autonomy", {5, 5, 4, 5, 3}}, {"q3_trust", {5, 4, 4, 5, 2}},
      {"q4_ease", {4, 4, 5, 3, 4}},      {"q5_reuse", {5, 4, 2, 4, 4}},    {"q6_safety", {5, 4, 4, 3, 3}},
      {"q7_speed", {4, 5, 3, 4, 2}},     {"q8_clarity", {3, 4, 5, 4, 3}}};
  const auto s = sf::curation::survey_stats(responses);
  int eighty = 0;
  int sixty = 0;
  bool medians = true;
  for (const auto& q : s.questions) {
    if (q.top_box_percent == 80.0) ++eighty;
    if (q.top_box_percent == 60.0) ++sixty;
    medians = medians && q.median >= 4.0;
  }
  v.check(eighty == 5 && sixty == 3, "top-box counts");
  v.check(medians, "agreement medians");
  v.check(s.questions.front().median == 5.0 && s.questions[1].median == 5.0, "strong-agreement medians");
  v.note(std::to_string(eighty) + " items at 80%, " + std::to_string(sixty) + " at 60%");
  return v;
}

// 10 ------------------------------------------------------------------------
Verdict comfort_banding() {
  using sf::metrics::ComfortBand;
  Verdict v;
  auto band = [](double x) { return sf::metrics::comfort_check(x).wheelchair_band; };
  v.check(band(0.1) == ComfortBand::Below, "0.1 below");
  v.check(band(0.3) == ComfortBand::Within, "0.3 within");
  v.check(band(0.9) == ComfortBand::Within, "0.9 within");
  v.check(band(std::nextafter(0.3, 0.0)) == ComfortBand::Below, "just under 0.3");
  v.check(band(std::nextafter(0.9, 1.0)) == ComfortBand::Above, "just over 0.9");
  v.check(band(1.2) == ComfortBand::Above, "1.2 above");
  v.note("0.1 -> " + std::string(sf::metrics::to_string(band(0.1))));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"sync oracle equivalence", sync_oracle_equivalence},
      {"tolerance semantics", tolerance_semantics},
      {"filter correctness", filter_correctness},
      {"jerk exactness", jerk_exactness},
      {"end-to-end recovery", end_to_end_recovery},
      {"dataset table reproduction", table_reproduction},
      {"transport integrity", transport_integrity},
      {"dialogue schema and round trip", dialogue_round_trip},
      {"survey statistics", survey_stats},
      {"comfort banding", comfort_banding},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
