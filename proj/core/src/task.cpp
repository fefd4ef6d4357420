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

#include "sessionforge/task.hpp"

namespace sessionforge {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::Cleaning: return "Cleaning";
    case Task::DoorOpening: return "DoorOpening";
    case Task::DrawerOpening: return "DrawerOpening";
    case Task::Drinking: return "Drinking";
    case Task::Feeding: return "Feeding";
  }
  return "Unknown";
}

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

}  // namespace sessionforge
