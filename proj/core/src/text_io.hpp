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

#ifndef SESSIONFORGE_SRC_TEXT_IO_HPP_
#define SESSIONFORGE_SRC_TEXT_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sessionforge/series.hpp"

namespace sessionforge::detail {

// %.17g; "nan" for gaps.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep);

// Throws Error(module, "MissingFile"/"IoError").
std::string read_file(const std::filesystem::path& path, const char* module);
void write_file(const std::filesystem::path& path, std::string_view content,
                const char* module);

// Series CSV: header "t,<ch1>,...". Units are not stored in the CSV (they
// live in the manifest), only channel names.
std::string series_to_csv(const TimedSeries& series);
TimedSeries series_from_csv(std::string_view text, const std::vector<Channel>& channels,
                            const std::string& where);

std::string timestamps_to_csv(const std::vector<double>& timestamps);
std::vector<double> timestamps_from_csv(std::string_view text, const std::string& where);

}  // namespace sessionforge::detail

#endif  // SESSIONFORGE_SRC_TEXT_IO_HPP_
