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

#ifndef SESSIONFORGE_ERROR_HPP_
#define SESSIONFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sessionforge {

// Every failure raised by the library carries the module that produced it
// and a stable code (e.g. "session_store" / "MissingFile"). The CLI maps
// these onto exit codes and the `--errors json` output.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& detail);

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string module_;
  std::string code_;
  std::string detail_;
};

namespace module_name {
inline constexpr const char* kSessionStore = "session_store";
inline constexpr const char* kTransport = "transport_gateway";
inline constexpr const char* kSync = "sync_engine";
inline constexpr const char* kDsp = "dsp_filters";
inline constexpr const char* kMetrics = "kinematics_metrics";
inline constexpr const char* kCuration = "curation";
inline constexpr const char* kDialogue = "dialogue_annotations";
inline constexpr const char* kSynth = "synth_generator";
}  // namespace module_name

}  // namespace sessionforge

#endif  // SESSIONFORGE_ERROR_HPP_
