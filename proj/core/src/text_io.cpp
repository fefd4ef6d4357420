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

#include "text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sessionforge/error.hpp"

namespace sessionforge::detail {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s == "nan" || s == "NaN" || s == "-nan") return std::nan("");
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string read_file(const fs::path& path, const char* module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "MissingFile", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content, const char* module) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(module, "IoError", path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(module, "IoError", "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error(module, "IoError", "write failed: " + path.string());
}

namespace {

// Iterates non-empty lines, tolerating a trailing newline and CRLF.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) f(line, lineno);
    ++lineno;
    start = end + 1;
  }
}

}  // namespace

std::string series_to_csv(const TimedSeries& series) {
  std::string out = "t";
  for (const auto& ch : series.channels) out += "," + ch.name;
  out += "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_double(series.timestamps[i]);
    for (std::size_t c = 0; c < series.channel_count(); ++c) {
      out += ',';
      out += format_double(series.value(i, c));
    }
    out += '\n';
  }
  return out;
}

TimedSeries series_from_csv(std::string_view text, const std::vector<Channel>& channels,
                            const std::string& where) {
  TimedSeries series(channels);
  bool header_seen = false;
  std::vector<double> row(channels.size());
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (cells.size() != channels.size() + 1 || cells[0] != "t") {
        throw Error(module_name::kSessionStore, "MalformedManifest",
                    where + ": CSV header does not match manifest channels");
      }
      for (std::size_t c = 0; c < channels.size(); ++c) {
        if (cells[c + 1] != channels[c].name) {
          throw Error(module_name::kSessionStore, "MalformedManifest",
                      where + ": CSV column '" + std::string(cells[c + 1]) +
                          "' != manifest channel '" + channels[c].name + "'");
        }
      }
      return;
    }
    if (cells.size() != channels.size() + 1) {
      throw Error(module_name::kSessionStore, "MalformedManifest",
                  where + ": wrong column count on line " + std::to_string(lineno + 1));
    }
    auto t = parse_double(cells[0]);
    if (!t) {
      throw Error(module_name::kSessionStore, "MalformedManifest",
                  where + ": bad timestamp on line " + std::to_string(lineno + 1));
    }
    for (std::size_t c = 0; c < channels.size(); ++c) {
      auto v = parse_double(cells[c + 1]);
      if (!v) {
        throw Error(module_name::kSessionStore, "MalformedManifest",
                    where + ": bad value on line " + std::to_string(lineno + 1));
      }
      row[c] = *v;
    }
    series.append(*t, row);
  });
  if (!header_seen) {
    throw Error(module_name::kSessionStore, "MalformedManifest", where + ": missing CSV header");
  }
  return series;
}

std::string timestamps_to_csv(const std::vector<double>& timestamps) {
  std::string out = "t\n";
  for (double t : timestamps) {
    out += format_double(t);
    out += '\n';
  }
  return out;
}

std::vector<double> timestamps_from_csv(std::string_view text, const std::string& where) {
  std::vector<double> out;
  bool header_seen = false;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    if (!header_seen) {
      header_seen = true;
      if (line != "t") {
        throw Error(module_name::kSessionStore, "MalformedManifest",
                    where + ": expected header 't'");
      }
      return;
    }
    auto t = parse_double(line);
    if (!t) {
      throw Error(module_name::kSessionStore, "MalformedManifest",
                  where + ": bad timestamp on line " + std::to_string(lineno + 1));
    }
    out.push_back(*t);
  });
  if (!header_seen) {
    throw Error(module_name::kSessionStore, "MalformedManifest", where + ": missing CSV header");
  }
  return out;
}

}  // namespace sessionforge::detail
