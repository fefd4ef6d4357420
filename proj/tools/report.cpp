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

#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>

#include "json.hpp"
#include "sessionforge/error.hpp"

namespace sessionforge::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Getter = std::function<double(const metrics::TrialMetrics&)>;

struct Quantity {
  const char* key;
  Getter get;
};

const std::vector<Quantity>& quantities() {
  static const std::vector<Quantity> q = {
      {"duration", [](const metrics::TrialMetrics& m) { return m.duration; }},
      {"ee_path_length", [](const metrics::TrialMetrics& m) { return m.ee_path_length; }},
      {"wheelchair_mean_jerk", [](const metrics::TrialMetrics& m) { return m.wheelchair_mean_jerk; }},
      {"ee_mean_jerk", [](const metrics::TrialMetrics& m) { return m.ee_mean_jerk; }},
  };
  return q;
}

std::optional<metrics::TaskAggregate> aggregate(const std::vector<metrics::TrialMetrics>& trials,
                                                Task task, const Getter& get) {
  std::vector<double> values;
  for (const auto& t : trials) {
    if (t.task == task) values.push_back(get(t));
  }
  if (values.empty()) return std::nullopt;
  return metrics::task_aggregate(values);
}

std::size_t count_task(const std::vector<metrics::TrialMetrics>& trials, Task task) {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [&](const auto& t) { return t.task == task; }));
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json aggregate_json(const std::optional<metrics::TaskAggregate>& a) {
  if (!a) return {{"mean", nullptr}, {"sd", nullptr}};
  return {{"mean", a->mean}, {"sd", opt(a->sd)}};
}

json trial_json(const metrics::TrialMetrics& m) {
  return {{"trial_id", m.trial_id},
          {"task", std::string(to_string(m.task))},
          {"duration", m.duration},
          {"ee_path_length", m.ee_path_length},
          {"ee_mean_jerk", m.ee_mean_jerk},
          {"wheelchair_mean_jerk", m.wheelchair_mean_jerk},
          {"wheelchair_comfort_band", std::string(metrics::to_string(m.comfort.wheelchair_band))}};
}

json panel_json(const std::vector<metrics::TrialMetrics>& trials, const Getter& get) {
  json rows = json::array();
  for (Task task : kAllTasks) {
    auto a = aggregate(trials, task, get);
    json row = {{"task", std::string(to_string(task))}, {"n", count_task(trials, task)}};
    row.update(aggregate_json(a));
    rows.push_back(std::move(row));
  }
  return rows;
}

json task_table_json(const std::vector<metrics::TrialMetrics>& trials) {
  json rows = json::array();
  for (Task task : kAllTasks) {
    json row = {{"task", std::string(to_string(task))}, {"n", count_task(trials, task)}};
    for (const auto& q : quantities()) row[q.key] = aggregate_json(aggregate(trials, task, q.get));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<fs::path> dirs_with(const fs::path& root, const char* marker) {
  if (!fs::is_directory(root)) {
    throw Error("cli", "MissingFile", root.string() + " is not a directory");
  }
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / marker)) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

sync::SyncedSession sync_raw(const RawSession& raw, const ProcessOptions& options) {
  std::vector<std::string> prefiltered;
  std::vector<std::string> warnings;
  sync::SyncedSession synced;
  if (options.prefilter) {
    const double rate = sync::reference_rate(raw);
    synced = sync::sync_session(dsp::prefilter_native(raw, options.policy, rate, prefiltered, warnings),
                                options.sync);
  } else {
    synced = sync::sync_session(raw, options.sync);
  }
  synced.prefiltered = std::move(prefiltered);
  warnings.insert(warnings.end(), synced.warnings.begin(), synced.warnings.end());
  synced.warnings = std::move(warnings);
  return synced;
}

TrialResult process_trial(const fs::path& raw_dir, const ProcessOptions& options,
                          const std::optional<fs::path>& synced_dir) {
  const RawSession raw = load_session(raw_dir);
  const auto denoised = dsp::denoise_session(sync_raw(raw, options), options.policy);
  if (synced_dir) sync::save_synced(denoised, *synced_dir);
  TrialResult r;
  r.metrics = metrics::compute_trial_metrics(denoised);
  for (const auto& w : denoised.warnings) r.warnings.push_back(denoised.manifest.session_id + ": " + w);
  return r;
}

std::string metrics_report_json(const std::vector<metrics::TrialMetrics>& trials) {
  json j;
  j["format"] = "sessionforge-metrics/1";
  json rows = json::array();
  for (const auto& t : trials) rows.push_back(trial_json(t));
  j["trials"] = std::move(rows);
  j["tasks"] = task_table_json(trials);
  return j.dump(2) + "\n";
}

std::string report_json(const ConsolidatedReport& r) {
  json j;
  j["format"] = "sessionforge-report/1";
  if (r.dataset) {
    j["dataset"] = json::parse(curation::stats_json(*r.dataset));
  } else {
    j["dataset"] = nullptr;
  }
  j["task_table"] = task_table_json(r.trials);

  json panels;
  json dist = json::array();
  const double total = static_cast<double>(r.trials.size());
  for (Task task : kAllTasks) {
    const auto n = count_task(r.trials, task);
    dist.push_back({{"task", std::string(to_string(task))},
                    {"n", n},
                    {"percent", total > 0 ? 100.0 * static_cast<double>(n) / total : 0.0}});
  }
  panels["task_distribution"] = std::move(dist);
  panels["completion_time"] = panel_json(r.trials, quantities()[0].get);
  panels["ee_path_length"] = panel_json(r.trials, quantities()[1].get);
  panels["wheelchair_mean_jerk"] = panel_json(r.trials, quantities()[2].get);
  panels["ee_mean_jerk"] = panel_json(r.trials, quantities()[3].get);

  const auto d = dialogue::ambiguity_distribution(r.dialogues);
  const auto shares = d.task_share_by_column();
  json share = json::array();
  for (std::size_t c = 0; c < dialogue::kDistributionColumns.size(); ++c) {
    json row = {{"label", std::string(dialogue::kDistributionColumns[c])}};
    for (Task task : kAllTasks) {
      auto it = shares.find(task);
      row[std::string(to_string(task))] = it == shares.end() ? 0.0 : it->second[c];
    }
    share.push_back(std::move(row));
  }
  panels["ambiguity_task_share"] = std::move(share);

  json utter = json::array();
  json by_task = json::array();
  for (Task task : kAllTasks) {
    auto get = [&](const std::map<Task, std::size_t>& m) {
      auto it = m.find(task);
      return it == m.end() ? std::size_t{0} : it->second;
    };
    utter.push_back({{"task", std::string(to_string(task))},
                     {"utterances", get(d.utterances)},
                     {"user_utterances", get(d.user_utterances)}});
    json row = {{"task", std::string(to_string(task))}};
    auto it = d.counts.find(task);
    for (std::size_t c = 0; c < dialogue::kDistributionColumns.size(); ++c) {
      row[std::string(dialogue::kDistributionColumns[c])] = it == d.counts.end() ? 0 : it->second[c];
    }
    by_task.push_back(std::move(row));
  }
  panels["utterance_counts"] = std::move(utter);
  panels["ambiguity_by_task"] = std::move(by_task);
  j["panels"] = std::move(panels);

  json rows = json::array();
  for (const auto& t : r.trials) rows.push_back(trial_json(t));
  j["trials"] = std::move(rows);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> report_csv(const ConsolidatedReport& r) {
  std::map<std::string, std::string> files;
  const json j = json::parse(report_json(r));
  if (r.dataset) files["dataset.csv"] = curation::stats_csv(*r.dataset);

  std::string table = "task,n";
  for (const auto& q : quantities()) table += std::string(",") + q.key + "_mean," + q.key + "_sd";
  table += "\n";
  for (Task task : kAllTasks) {
    table += std::string(to_string(task)) + "," + std::to_string(count_task(r.trials, task));
    for (const auto& q : quantities()) {
      auto a = aggregate(r.trials, task, q.get);
      table += "," + csv_number(a ? std::optional<double>(a->mean) : std::nullopt);
      table += "," + csv_number(a ? a->sd : std::nullopt);
    }
    table += "\n";
  }
  files["task_table.csv"] = std::move(table);

  // Remaining panels are flat arrays of objects with scalar fields.
  for (const auto& [name, rows] : j["panels"].items()) {
    std::string text;
    bool header = true;
    for (const auto& row : rows) {
      if (header) {
        bool first = true;
        for (const auto& [k, _] : row.items()) {
          text += (first ? "" : ",") + k;
          first = false;
        }
        text += "\n";
        header = false;
      }
      bool first = true;
      for (const auto& [_, v] : row.items()) {
        std::string cell;
        if (v.is_string()) {
          cell = csv_escape(v.get<std::string>());
        } else if (v.is_number_float()) {
          cell = format_number(v.get<double>());
        } else if (!v.is_null()) {
          cell = v.dump();
        }
        text += (first ? "" : ",") + cell;
        first = false;
      }
      text += "\n";
    }
    files[name + ".csv"] = std::move(text);
  }

  std::string trials = "trial_id,task,duration,ee_path_length,ee_mean_jerk,wheelchair_mean_jerk,wheelchair_comfort_band\n";
  for (const auto& t : r.trials) {
    trials += csv_escape(t.trial_id) + "," + std::string(to_string(t.task)) + "," +
              format_number(t.duration) + "," + format_number(t.ee_path_length) + "," +
              format_number(t.ee_mean_jerk) + "," + format_number(t.wheelchair_mean_jerk) + "," +
              std::string(metrics::to_string(t.comfort.wheelchair_band)) + "\n";
  }
  files["trials.csv"] = std::move(trials);
  return files;
}

void write_report(const ConsolidatedReport& report, const fs::path& out_dir, bool json_out, bool csv_out) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cli", "IoError", "cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw Error("cli", "IoError", "cannot write " + p.string());
  };
  if (json_out) write(out_dir / "report.json", report_json(report));
  if (csv_out) {
    for (const auto& [name, text] : report_csv(report)) write(out_dir / name, text);
  }
}

std::vector<fs::path> session_dirs(const fs::path& root) { return dirs_with(root, "manifest.json"); }

std::vector<fs::path> synced_dirs(const fs::path& root) { return dirs_with(root, "synced.json"); }

}  // namespace sessionforge::cli
