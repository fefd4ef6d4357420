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

#include "json.hpp"
#include "sessionforge/error.hpp"
#include "sessionforge/sync.hpp"
#include "text_io.hpp"

namespace sessionforge::sync {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "sessionforge-synced/1";

[[noreturn]] void malformed(const std::string& why) {
  throw Error(module_name::kSync, "MalformedSyncedSession", why);
}

json report_json(const SyncedSession& synced) {
  json streams = json::array();
  for (const auto& r : sync_report(synced)) {
    streams.push_back({{"stream", r.stream},
                       {"grid_points", r.grid_points},
                       {"accepted", r.accepted},
                       {"acceptance_rate", r.acceptance_rate}});
  }
  json j;
  j["session_id"] = synced.manifest.session_id;
  j["grid"] = {{"rate", synced.grid.rate},
               {"count", synced.grid.size()},
               {"t_ref_start", synced.window.start},
               {"t_ref_end", synced.window.end}};
  j["tau"] = synced.tau;
  j["streams"] = std::move(streams);
  j["warnings"] = synced.warnings;
  return j;
}

}  // namespace

std::string sync_report_json(const SyncedSession& synced) {
  return report_json(synced).dump(2) + "\n";
}

bool is_synced_dir(const fs::path& root) { return fs::exists(root / "synced.json"); }

void save_synced(const SyncedSession& synced, const fs::path& root) {
  const char* mod = module_name::kSync;
  json meta;
  meta["format"] = kFormat;
  meta["manifest"] = json::parse(manifest_to_json(synced.manifest));
  meta["grid"] = {{"rate", synced.grid.rate},
                  {"count", synced.grid.size()},
                  {"t_ref_start", synced.window.start},
                  {"t_ref_end", synced.window.end}};
  meta["tau"] = synced.tau;
  meta["prefiltered"] = synced.prefiltered;
  meta["denoised"] = synced.denoised;
  meta["warnings"] = synced.warnings;

  detail::write_file(root / "grid.csv", detail::timestamps_to_csv(synced.grid.timestamps), mod);
  for (const auto& sel : synced.selections) {
    std::string csv = "k,t,index,accepted\n";
    for (std::size_t k = 0; k < sel.selected_indices.size(); ++k) {
      csv += std::to_string(k) + "," + detail::format_double(synced.grid.timestamps[k]) + "," +
             std::to_string(sel.selected_indices[k]) + "," + (sel.accepted[k] ? "1" : "0") + "\n";
    }
    detail::write_file(root / "selections" / (sel.stream + ".csv"), csv, mod);
  }
  for (const auto& [name, series] : synced.numeric) {
    detail::write_file(root / "streams" / (name + ".csv"), detail::series_to_csv(series), mod);
  }
  std::string dialogue_text;
  if (synced.dialogue) dialogue_text = dialogue::export_jsonl(std::span(&*synced.dialogue, 1));
  detail::write_file(root / "dialogue.jsonl", dialogue_text, mod);
  detail::write_file(root / "sync_report.json", sync_report_json(synced), mod);
  detail::write_file(root / "synced.json", meta.dump(2) + "\n", mod);
}

SyncedSession load_synced(const fs::path& root) {
  const char* mod = module_name::kSync;
  json meta;
  try {
    meta = json::parse(detail::read_file(root / "synced.json", mod));
  } catch (const json::parse_error& e) {
    malformed(std::string("synced.json: ") + e.what());
  }
  if (meta.value("format", std::string{}) != kFormat) malformed("unknown synced format");

  SyncedSession s;
  try {
    s.manifest = manifest_from_json(meta.at("manifest").dump());
    s.grid.rate = meta.at("grid").at("rate").get<double>();
    s.window.start = meta.at("grid").at("t_ref_start").get<double>();
    s.window.end = meta.at("grid").at("t_ref_end").get<double>();
    s.tau = meta.at("tau").get<double>();
    s.prefiltered = meta.value("prefiltered", std::vector<std::string>{});
    s.denoised = meta.value("denoised", false);
    s.warnings = meta.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    malformed(std::string("synced.json: ") + e.what());
  }
  s.grid.timestamps = detail::timestamps_from_csv(
      detail::read_file(root / "grid.csv", mod), (root / "grid.csv").string());

  for (const auto& d : s.manifest.streams) {
    if (d.kind == StreamKind::VideoFrames) {
      const fs::path p = root / "selections" / (d.name + ".csv");
      const std::string text = detail::read_file(p, mod);
      FrameSelection sel;
      sel.stream = d.name;
      bool header = true;
      std::size_t start = 0;
      while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        if (header) {
          header = false;
          continue;
        }
        auto cells = detail::split(line, ',');
        if (cells.size() != 4) malformed(p.string() + ": expected 4 columns");
        sel.selected_indices.push_back(std::stoul(std::string(cells[2])));
        sel.accepted.push_back(cells[3] == "1");
      }
      if (sel.selected_indices.size() != s.grid.size()) {
        malformed(p.string() + ": selection length differs from grid");
      }
      s.selections.push_back(std::move(sel));
    } else if (d.kind == StreamKind::Numeric) {
      const fs::path p = root / "streams" / (d.name + ".csv");
      auto series = detail::series_from_csv(detail::read_file(p, mod), d.channels, p.string());
      if (series.size() != s.grid.size()) malformed(p.string() + ": length differs from grid");
      s.numeric.emplace(d.name, std::move(series));
    }
  }
  const fs::path dialogue_file = root / "dialogue.jsonl";
  if (fs::exists(dialogue_file)) {
    auto records = dialogue::import_jsonl(detail::read_file(dialogue_file, mod));
    if (!records.empty()) s.dialogue = std::move(records.front());
  }
  return s;
}

}  // namespace sessionforge::sync
