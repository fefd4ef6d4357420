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

#include "sessionforge/error.hpp"

#include <utility>

namespace sessionforge {

Error::Error(std::string module, std::string code, const std::string& detail)
    : std::runtime_error(module + ": " + code + (detail.empty() ? "" : ": " + detail)),
      module_(std::move(module)),
      code_(std::move(code)),
      detail_(detail) {}

}  // namespace sessionforge
