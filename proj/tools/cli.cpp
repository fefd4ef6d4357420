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

#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "report.hpp"
#include "sessionforge/curation.hpp"
#include "sessionforge/dialogue.hpp"
#include "sessionforge/error.hpp"
#include "sessionforge/filter.hpp"
#include "sessionforge/metrics.hpp"
#include "sessionforge/recorder.hpp"
#include "sessionforge/session.hpp"
#include "sessionforge/sync.hpp"
#include "sessionforge/synth.hpp"

namespace sessionforge::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kModule = "cli";

// Raised for bad invocations detected after parsing (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(kModule, "MissingFile", "cannot read " + p.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw Error(kModule, "IoError", "cannot write " + p.string());
}

dsp::DenoisePolicy load_policy(const std::string& arg) {
  if (arg == "default") return dsp::DenoisePolicy::standard();
  return dsp::policy_from_json(read_text(arg));
}

std::vector<Channel> channels_from_json(const json& j) {
  std::vector<Channel> out;
  for (const auto& c : j) {
    if (c.is_string()) {
      out.push_back({c.get<std::string>(), "1"});
    } else {
      out.push_back({c.at("name").get<std::string>(), c.value("unit", std::string("1"))});
    }
  }
  return out;
}

std::map<std::string, StreamDescriptor> default_stream_map() {
  auto numeric = [](std::string name, std::vector<Channel> ch) {
    StreamDescriptor d;
    d.name = std::move(name);
    d.kind = StreamKind::Numeric;
    d.nominal_rate = 100.0;
    d.channels = std::move(ch);
    return d;
  };
  auto video = [](std::string name, double rate) {
    StreamDescriptor d;
    d.name = std::move(name);
    d.kind = StreamKind::VideoFrames;
    d.nominal_rate = rate;
    d.channels = {{"frame", "1"}};
    return d;
  };
  std::map<std::string, StreamDescriptor> m;
  m["ee_pose"] = numeric("ee_pose", {{"x", "m"}, {"y", "m"}, {"z", "m"},
                                     {"qx", "1"}, {"qy", "1"}, {"qz", "1"}, {"qw", "1"}});
  m["wheelchair"] = numeric("wheelchair", {{"x", "m"}, {"y", "m"}, {"theta", "rad"}});
  m["arm_joints"] = numeric("arm_joints", {{"j1", "rad"}, {"j2", "rad"}, {"j3", "rad"},
                                           {"j4", "rad"}, {"j5", "rad"}, {"j6", "rad"}});
  m["imu"] = numeric("imu", {{"ax", "m/s^2"}, {"ay", "m/s^2"}, {"az", "m/s^2"},
                             {"gx", "rad/s"}, {"gy", "rad/s"}, {"gz", "rad/s"}});
  m["camera_0"] = video("camera_0", 15.0);
  m["camera_1"] = video("camera_1", 12.0);
  return m;
}

std::map<std::string, StreamDescriptor> stream_map_from_json(const std::string& text) {
  std::map<std::string, StreamDescriptor> out;
  try {
    const json j = json::parse(text);
    for (const auto& [topic, v] : j.items()) {
      StreamDescriptor d;
      d.name = v.value("name", topic);
      auto kind = parse_stream_kind(v.value("kind", std::string("numeric")));
      if (!kind || *kind == StreamKind::Audio) {
        throw Error(kModule, "InvalidConfig", "stream '" + topic + "': kind must be numeric or video_frames");
      }
      d.kind = *kind;
      d.nominal_rate = v.at("nominal_rate").get<double>();
      d.channels = v.contains("channels") ? channels_from_json(v["channels"])
                                          : std::vector<Channel>{{"frame", "1"}};
      d.file = v.value("file", std::string());
      out.emplace(topic, std::move(d));
    }
  } catch (const json::exception& e) {
    throw Error(kModule, "InvalidConfig", std::string("stream map: ") + e.what());
  }
  return out;
}

std::vector<metrics::TrialMetrics> sorted_metrics(std::vector<metrics::TrialMetrics> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.task != b.task) return a.task < b.task;
    return a.trial_id < b.trial_id;
  });
  return v;
}

std::vector<curation::ViolationFlag> parse_flags(const std::vector<std::string>& raw) {
  std::vector<curation::ViolationFlag> flags;
  for (const auto& f : raw) flags.push_back(curation::parse_flag(f));
  return flags;
}

fs::path dialogue_file(const fs::path& in) {
  return fs::is_directory(in) ? in / "dialogue.jsonl" : in;
}

std::string distribution_json(const dialogue::AmbiguityDistribution& d, const std::string& by) {
  json rows = json::array();
  if (by == "task") {
    for (Task task : kAllTasks) {
      json row = {{"task", std::string(to_string(task))}};
      auto it = d.counts.find(task);
      for (std::size_t c = 0; c < dialogue::kDistributionColumns.size(); ++c) {
        row[std::string(dialogue::kDistributionColumns[c])] = it == d.counts.end() ? 0 : it->second[c];
      }
      auto count = [&](const std::map<Task, std::size_t>& m) {
        auto f = m.find(task);
        return f == m.end() ? std::size_t{0} : f->second;
      };
      row["utterances"] = count(d.utterances);
      row["user_utterances"] = count(d.user_utterances);
      row["labeled_turns"] = count(d.labeled_turns);
      rows.push_back(std::move(row));
    }
  } else {
    const auto shares = d.task_share_by_column();
    for (std::size_t c = 0; c < dialogue::kDistributionColumns.size(); ++c) {
      json row = {{"label", std::string(dialogue::kDistributionColumns[c])}};
      for (Task task : kAllTasks) {
        auto it = shares.find(task);
        row[std::string(to_string(task))] = it == shares.end() ? 0.0 : it->second[c];
      }
      rows.push_back(std::move(row));
    }
  }
  return rows.dump(2) + "\n";
}

std::string rows_to_csv(const std::string& json_rows) {
  const json rows = json::parse(json_rows);
  std::string out;
  bool header = true;
  for (const auto& row : rows) {
    if (header) {
      bool first = true;
      for (const auto& [k, _] : row.items()) {
        out += (first ? "" : ",") + k;
        first = false;
      }
      out += "\n";
      header = false;
    }
    bool first = true;
    for (const auto& [_, v] : row.items()) {
      std::string cell = v.is_string() ? v.get<std::string>()
                         : v.is_number_float() ? format_number(v.get<double>())
                                               : v.dump();
      out += (first ? "" : ",") + cell;
      first = false;
    }
    out += "\n";
  }
  return out;
}

void print_error(std::ostream& err, bool json_errors, const std::string& module, const std::string& code,
                 const std::string& detail, int exit_code) {
  if (json_errors) {
    json j = {{"module", module}, {"code", code}, {"detail", detail}, {"exit_code", exit_code}};
    err << j.dump() << "\n";
  } else {
    err << "error: " << module << ": " << code << ": " << detail << "\n";
  }
}

bool wants_json_errors(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--errors=json") return true;
    if (args[i] == "--errors" && i + 1 < args.size() && args[i + 1] == "json") return true;
  }
  return false;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const bool json_errors = wants_json_errors(args);

  CLI::App app{"Record, synchronise, denoise and analyse multimodal assistive-robot sessions.",
               "sessionforge"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string errors_format = "text";
  int jobs = 1;
  std::string root;
  if (const char* env = std::getenv("SESSIONFORGE_ROOT")) root = env;
  app.add_option("--errors", errors_format, "Error output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs,-j", jobs, "Worker threads for per-trial stages")->check(CLI::PositiveNumber);
  app.add_option("--root", root, "Dataset root (default: $SESSIONFORGE_ROOT)");

  std::function<void()> action;
  auto need_root = [&]() -> fs::path {
    if (root.empty()) throw UsageError("no dataset root: pass --root or set SESSIONFORGE_ROOT");
    return root;
  };

  // record
  auto* record = app.add_subcommand("record", "Record TCP frames and UDP audio into a session");
  struct {
    std::string bind = "127.0.0.1";
    int tcp_port = 0;
    int udp_port = 0;
    std::string out;
    std::string streams;
    std::string session_id;
    std::string participant = "P00";
    std::string task;
    double duration = 0.0;
  } rec;
  record->add_option("--bind", rec.bind, "Address to bind");
  record->add_option("--tcp-port", rec.tcp_port, "TCP port (0: ephemeral)")->check(CLI::Range(0, 65535));
  record->add_option("--udp-port", rec.udp_port, "UDP audio port (0: ephemeral, -1: no audio)")
      ->check(CLI::Range(-1, 65535));
  record->add_option("--out", rec.out, "Session directory (default: <root>/<session-id>)");
  record->add_option("--streams", rec.streams, "JSON map topic -> stream descriptor");
  record->add_option("--session-id", rec.session_id, "Session id");
  record->add_option("--participant", rec.participant, "Participant id");
  record->add_option("--task", rec.task, "Task name")->required();
  record->add_option("--duration", rec.duration, "Stop after this many seconds (default: on SIGINT)")
      ->check(CLI::NonNegativeNumber);
  record->callback([&] {
    action = [&] {
      RecorderConfig config;
      config.bind_address = rec.bind;
      config.tcp_port = static_cast<std::uint16_t>(rec.tcp_port);
      config.udp_port = rec.udp_port < 0 ? std::nullopt
                                         : std::optional<std::uint16_t>(static_cast<std::uint16_t>(rec.udp_port));
      config.streams = rec.streams.empty() ? default_stream_map() : stream_map_from_json(read_text(rec.streams));
      std::string id = rec.session_id;
      if (id.empty()) {
        id = "rec-" + utc_now_iso8601();
        std::erase_if(id, [](char c) { return c == ':' || c == '-'; });
      }
      config.manifest_template.session_id = id;
      config.manifest_template.participant_id = rec.participant;
      config.manifest_template.task = rec.task;
      config.session_root = rec.out.empty() ? need_root() / id : fs::path(rec.out);

      auto handle = start_recording(config);
      out << "tcp_port=" << handle.tcp_port();
      if (auto u = handle.udp_port()) out << " udp_port=" << *u;
      out << std::endl;

      g_interrupted = false;
      auto old_int = std::signal(SIGINT, on_signal);
      auto old_term = std::signal(SIGTERM, on_signal);
      const auto start = std::chrono::steady_clock::now();
      while (!g_interrupted) {
        if (rec.duration > 0.0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= rec.duration) {
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
      std::signal(SIGINT, old_int);
      std::signal(SIGTERM, old_term);

      handle.stop();
      const auto stats = handle.stats();
      json j;
      j["session_root"] = config.session_root.string();
      j["frames_recorded"] = stats.frames_recorded;
      j["frames_malformed"] = stats.frames_malformed;
      j["frames_rejected"] = stats.frames_rejected;
      j["datagrams_received"] = stats.datagrams_received;
      j["audio_missing_datagrams"] = handle.audio_gaps().missing_count();
      j["warnings"] = handle.warnings();
      out << j.dump(2) << "\n";
    };
  });

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate deterministic synthetic sessions");
  struct {
    std::optional<std::uint64_t> seed;
    std::string scenario;
    std::string out;
    int count = 1;
  } syn;
  synth_cmd->add_option("--seed", syn.seed, "Seed (overrides the scenario)");
  synth_cmd->add_option("--scenario", syn.scenario, "Scenario JSON file");
  synth_cmd->add_option("--out", syn.out, "Output directory")->required();
  synth_cmd->add_option("--count", syn.count, "Trials to generate (>1 writes one sub-directory each)")
      ->check(CLI::PositiveNumber);
  synth_cmd->callback([&] {
    action = [&] {
      synth::Scenario base = syn.scenario.empty() ? synth::Scenario{}
                                                  : synth::scenario_from_json(read_text(syn.scenario));
      if (syn.seed) base.seed = *syn.seed;
      if (syn.count == 1) {
        const auto g = synth::gen_session(base);
        synth::write_generated(g, base, syn.out);
        out << synth::ground_truth_json(g.truth);
        return;
      }
      const auto scenarios = synth::expand_dataset(base, syn.count);
      std::vector<std::string> ids(scenarios.size());
      parallel_for(scenarios.size(), jobs, [&](std::size_t i) {
        const auto g = synth::gen_session(scenarios[i]);
        ids[i] = g.session.manifest.session_id;
        synth::write_generated(g, scenarios[i], fs::path(syn.out) / ids[i]);
      });
      for (const auto& id : ids) out << id << "\n";
    };
  });

  // sync
  auto* sync_cmd = app.add_subcommand("sync", "Align a raw session onto the reference grid");
  struct {
    std::string in;
    std::string out;
    std::optional<double> tau;
    double max_gap = sync::kDefaultMaxGap;
    std::string policy = "default";
    bool no_prefilter = false;
  } syn_opts;
  sync_cmd->add_option("--in", syn_opts.in, "Raw session directory")->required();
  sync_cmd->add_option("--out", syn_opts.out, "Synced output directory")->required();
  sync_cmd->add_option("--tau", syn_opts.tau, "Match tolerance in seconds (default: half a grid period)")
      ->check(CLI::NonNegativeNumber);
  sync_cmd->add_option("--max-gap", syn_opts.max_gap, "Longest bridgeable gap in seconds")
      ->check(CLI::NonNegativeNumber);
  sync_cmd->add_option("--policy", syn_opts.policy, "Filter policy for native-rate prefiltering: default|<file>");
  sync_cmd->add_flag("--no-prefilter", syn_opts.no_prefilter, "Skip native-rate prefiltering");
  sync_cmd->callback([&] {
    action = [&] {
      ProcessOptions options;
      options.sync.tau = syn_opts.tau;
      options.sync.max_gap = syn_opts.max_gap;
      options.policy = load_policy(syn_opts.policy);
      options.prefilter = !syn_opts.no_prefilter;
      const auto synced = sync_raw(load_session(syn_opts.in), options);
      sync::save_synced(synced, syn_opts.out);
      out << sync::sync_report_json(synced);
    };
  });

  // denoise
  auto* denoise_cmd = app.add_subcommand("denoise", "Zero-phase low-pass filter a synced session");
  struct {
    std::string in;
    std::string out;
    std::string policy = "default";
    bool lenient = false;
  } den;
  denoise_cmd->add_option("--in", den.in, "Synced session directory")->required();
  denoise_cmd->add_option("--out", den.out, "Output directory (default: in place)");
  denoise_cmd->add_option("--policy", den.policy, "default|<policy JSON file>");
  denoise_cmd->add_flag("--lenient", den.lenient, "Pass unclassified streams through with a warning");
  denoise_cmd->callback([&] {
    action = [&] {
      auto policy = load_policy(den.policy);
      if (den.lenient) policy.strict = false;
      const auto result = dsp::denoise_session(sync::load_synced(den.in), policy);
      sync::save_synced(result, den.out.empty() ? den.in : den.out);
      json j = {{"session_id", result.manifest.session_id}, {"warnings", result.warnings}};
      out << j.dump(2) << "\n";
    };
  });

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Trial and task metrics from synced sessions");
  struct {
    std::vector<std::string> in;
    std::string report;
  } ana;
  analyze->add_option("--in", ana.in, "Synced session directories, or directories containing them")
      ->required();
  analyze->add_option("--report", ana.report, "Write the metrics JSON here (default: stdout)");
  analyze->callback([&] {
    action = [&] {
      std::vector<fs::path> dirs;
      for (const auto& p : ana.in) {
        if (sync::is_synced_dir(p)) {
          dirs.emplace_back(p);
        } else {
          auto found = synced_dirs(p);
          if (found.empty()) throw Error(kModule, "MissingFile", "no synced sessions under " + p);
          dirs.insert(dirs.end(), found.begin(), found.end());
        }
      }
      std::vector<metrics::TrialMetrics> m(dirs.size());
      parallel_for(dirs.size(), jobs,
                   [&](std::size_t i) { m[i] = metrics::compute_trial_metrics(sync::load_synced(dirs[i])); });
      const std::string text = metrics_report_json(sorted_metrics(std::move(m)));
      if (ana.report.empty()) {
        out << text;
      } else {
        write_text(ana.report, text);
      }
    };
  });

  // curate
  auto* curate = app.add_subcommand("curate", "Success labels, dataset statistics and surveys");
  curate->require_subcommand(1);
  struct {
    std::string trial;
    std::vector<std::string> flags;
    std::string format = "json";
    std::string out;
    bool lenient = false;
    std::string survey_in;
  } cur;
  auto* label = curate->add_subcommand("label", "Label a trial; no flags marks it successful");
  label->add_option("trial", cur.trial, "Trial id (directory under the root)")->required();
  label->add_option("--flags", cur.flags,
                    "ObjectDrop ItemFell EnvironmentCollision InappropriateForce Other:<text>");
  label->callback([&] {
    action = [&] {
      const auto m = curation::label_trial(need_root(), cur.trial, parse_flags(cur.flags));
      json j = {{"trial_id", m.session_id}, {"success", m.success.value_or(false)}, {"flags", m.flags}};
      out << j.dump(2) << "\n";
    };
  });
  auto* stats = curate->add_subcommand("stats", "Raw vs. successful trials per task");
  stats->add_option("--format", cur.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  stats->callback([&] {
    action = [&] {
      const auto manifests = curation::load_manifests(need_root());
      const auto s = curation::dataset_stats(manifests);
      out << (cur.format == "csv" ? curation::stats_csv(s) : curation::stats_json(s));
    };
  });
  auto* filter = curate->add_subcommand("filter", "List successful trials ordered by task and id");
  filter->add_option("--out", cur.out, "Write the list here (default: stdout)");
  filter->add_flag("--lenient", cur.lenient, "Exclude unlabeled trials with a warning");
  filter->callback([&] {
    action = [&] {
      const auto r = curation::filter_successful(need_root(), !cur.lenient);
      std::string text;
      for (const auto& t : r.trials) text += t + "\n";
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      if (cur.out.empty()) {
        out << text;
      } else {
        write_text(cur.out, text);
      }
    };
  });
  auto* survey = curate->add_subcommand("survey", "Median and top-box per survey question");
  survey->add_option("--in", cur.survey_in, "CSV with question_id,participant_id,rating")->required();
  survey->add_option("--format", cur.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  survey->callback([&] {
    action = [&] {
      const auto summary = curation::survey_stats(curation::parse_survey_csv(read_text(cur.survey_in)));
      if (cur.format == "csv") {
        out << "question_id,n,median,top_box_percent\n";
        for (const auto& q : summary.questions) {
          out << q.question << "," << q.n << "," << format_number(q.median) << ","
              << format_number(q.top_box_percent) << "\n";
        }
      } else {
        out << curation::survey_json(summary);
      }
    };
  });

  // dialogue
  auto* dlg = app.add_subcommand("dialogue", "Ambiguity annotation, JSONL export and statistics");
  dlg->require_subcommand(1);
  struct {
    std::string in;
    std::string trial;
    int turn = -1;
    std::string clarity;
    std::string type;
    std::string out;
    std::string by = "task";
    std::string format = "json";
  } dia;
  auto* annotate = dlg->add_subcommand("annotate", "Label one user turn");
  annotate->add_option("--in", dia.in, "Session directory or JSONL file")->required();
  annotate->add_option("--trial", dia.trial, "Trial id when the file holds several records");
  annotate->add_option("--turn", dia.turn, "Turn index")->required();
  annotate->add_option("--clarity", dia.clarity, "Specific|Ambiguous")->required();
  annotate->add_option("--type", dia.type,
                       "Spatial|Referential|IntentPragmatic|TemporalIncremental|OutOfScope");
  annotate->callback([&] {
    action = [&] {
      const fs::path file = dialogue_file(dia.in);
      auto dialogues = dialogue::import_jsonl(read_text(file));
      auto clarity = dialogue::parse_clarity(dia.clarity);
      if (!clarity) throw UsageError("unknown clarity '" + dia.clarity + "'");
      dialogue::AmbiguityLabel label{*clarity, std::nullopt};
      if (!dia.type.empty()) {
        label.type = dialogue::parse_ambiguity_type(dia.type);
        if (!label.type) throw UsageError("unknown ambiguity type '" + dia.type + "'");
      }
      bool found = false;
      for (auto& d : dialogues) {
        if (!dia.trial.empty() ? d.trial_id == dia.trial : dialogues.size() == 1) {
          d = dialogue::annotate_utterance(d, dia.turn, label);
          found = true;
        }
      }
      if (!found) {
        throw Error(module_name::kDialogue, "UnknownTrial",
                    dia.trial.empty() ? "file holds several dialogues; pass --trial" : "no dialogue '" + dia.trial + "'");
      }
      write_text(file, dialogue::export_jsonl(dialogues));
    };
  });
  auto* dexport = dlg->add_subcommand("export", "Collect the dataset's dialogues into one JSONL file");
  dexport->add_option("--out", dia.out, "Output JSONL file (default: stdout)");
  dexport->callback([&] {
    action = [&] {
      std::vector<dialogue::AnnotatedDialogue> all;
      for (const auto& dir : session_dirs(need_root())) {
        const fs::path f = dir / "dialogue.jsonl";
        if (!fs::exists(f)) continue;
        auto ds = dialogue::import_jsonl(read_text(f));
        all.insert(all.end(), ds.begin(), ds.end());
      }
      const std::string text = dialogue::export_jsonl(all);
      if (dia.out.empty()) {
        out << text;
      } else {
        write_text(dia.out, text);
      }
    };
  });
  auto* dstats = dlg->add_subcommand("stats", "Ambiguity distribution by task or by type");
  dstats->add_option("--by", dia.by, "task|type")->check(CLI::IsMember({"task", "type"}));
  dstats->add_option("--in", dia.in, "JSONL file (default: every session under the root)");
  dstats->add_option("--format", dia.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  dstats->callback([&] {
    action = [&] {
      std::vector<dialogue::AnnotatedDialogue> all;
      if (!dia.in.empty()) {
        all = dialogue::import_jsonl(read_text(dialogue_file(dia.in)));
      } else {
        for (const auto& dir : session_dirs(need_root())) {
          const fs::path f = dir / "dialogue.jsonl";
          if (!fs::exists(f)) continue;
          auto ds = dialogue::import_jsonl(read_text(f));
          all.insert(all.end(), ds.begin(), ds.end());
        }
      }
      const std::string rows = distribution_json(dialogue::ambiguity_distribution(all), dia.by);
      out << (dia.format == "csv" ? rows_to_csv(rows) : rows);
    };
  });

  // report and pipeline
  struct {
    std::string synced;
    std::string out;
    std::string format = "both";
    std::optional<double> tau;
    double max_gap = sync::kDefaultMaxGap;
    std::string policy = "default";
  } rep;
  auto write_formats = [&](const ConsolidatedReport& r) {
    write_report(r, rep.out, rep.format != "csv", rep.format != "json");
  };

  auto* report = app.add_subcommand("report", "Consolidated report from synced sessions");
  report->add_option("--synced", rep.synced, "Directory containing synced sessions")->required();
  report->add_option("--out", rep.out, "Report directory")->required();
  report->add_option("--format", rep.format, "json|csv|both")->check(CLI::IsMember({"json", "csv", "both"}));
  report->callback([&] {
    action = [&] {
      ConsolidatedReport r;
      if (!root.empty()) r.dataset = curation::dataset_stats(curation::load_manifests(root));
      const auto dirs = synced_dirs(rep.synced);
      std::vector<sync::SyncedSession> sessions(dirs.size());
      parallel_for(dirs.size(), jobs, [&](std::size_t i) { sessions[i] = sync::load_synced(dirs[i]); });
      for (const auto& s : sessions) {
        r.trials.push_back(metrics::compute_trial_metrics(s));
        if (s.dialogue) r.dialogues.push_back(*s.dialogue);
      }
      r.trials = sorted_metrics(std::move(r.trials));
      write_formats(r);
      out << "report: " << r.trials.size() << " trial(s) -> " << rep.out << "\n";
    };
  });

  auto* pipeline = app.add_subcommand("pipeline", "sync -> denoise -> analyze -> curate stats -> dialogue stats");
  pipeline->add_option("--out", rep.out, "Output directory (synced sessions and report)")->required();
  pipeline->add_option("--format", rep.format, "json|csv|both")->check(CLI::IsMember({"json", "csv", "both"}));
  pipeline->add_option("--tau", rep.tau, "Match tolerance in seconds")->check(CLI::NonNegativeNumber);
  pipeline->add_option("--max-gap", rep.max_gap, "Longest bridgeable gap in seconds")
      ->check(CLI::NonNegativeNumber);
  pipeline->add_option("--policy", rep.policy, "default|<policy JSON file>");
  pipeline->callback([&] {
    action = [&] {
      const fs::path dataset = need_root();
      const auto dirs = session_dirs(dataset);
      std::vector<SessionManifest> manifests;
      std::map<std::string, fs::path> dir_of;
      for (const auto& d : dirs) {
        manifests.push_back(load_manifest(d / "manifest.json"));
        dir_of[manifests.back().session_id] = d;
      }
      ConsolidatedReport r;
      r.dataset = curation::dataset_stats(manifests);
      const auto kept = curation::filter_successful(manifests, false);
      r.warnings = kept.warnings;

      ProcessOptions options;
      options.sync.tau = rep.tau;
      options.sync.max_gap = rep.max_gap;
      options.policy = load_policy(rep.policy);
      std::vector<TrialResult> results(kept.trials.size());
      parallel_for(kept.trials.size(), jobs, [&](std::size_t i) {
        const auto& id = kept.trials[i];
        results[i] = process_trial(dir_of.at(id), options, fs::path(rep.out) / "synced" / id);
      });
      for (std::size_t i = 0; i < results.size(); ++i) {
        r.trials.push_back(results[i].metrics);
        r.warnings.insert(r.warnings.end(), results[i].warnings.begin(), results[i].warnings.end());
        const fs::path f = dir_of.at(kept.trials[i]) / "dialogue.jsonl";
        if (fs::exists(f)) {
          auto ds = dialogue::import_jsonl(read_text(f));
          r.dialogues.insert(r.dialogues.end(), ds.begin(), ds.end());
        }
      }
      r.trials = sorted_metrics(std::move(r.trials));
      write_formats(r);
      out << "pipeline: " << r.trials.size() << " of " << manifests.size() << " trial(s) analysed -> "
          << rep.out << "\n";
    };
  });

  std::vector<const char*> argv{"sessionforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (json_errors) {
      print_error(err, true, kModule, "UsageError", e.what(), kExitUsage);
    } else {
      err << "error: " << e.what() << "\n\n" << app.help();
    }
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const UsageError& e) {
    print_error(err, json_errors, kModule, "UsageError", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const Error& e) {
    print_error(err, json_errors, e.module(), e.code(), e.detail(), kExitDataError);
    return kExitDataError;
  } catch (const fs::filesystem_error& e) {
    print_error(err, json_errors, kModule, "IoError", e.what(), kExitDataError);
    return kExitDataError;
  } catch (const std::exception& e) {
    print_error(err, json_errors, kModule, "InternalError", e.what(), kExitDataError);
    return kExitDataError;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sessionforge::cli
