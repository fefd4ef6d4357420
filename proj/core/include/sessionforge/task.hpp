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

#ifndef SESSIONFORGE_TASK_HPP_
#define SESSIONFORGE_TASK_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace sessionforge {

// The five assistive tasks of the dataset.
enum class Task { Cleaning, DoorOpening, DrawerOpening, Drinking, Feeding };

inline constexpr std::array<Task, 5> kAllTasks = {
    Task::Cleaning, Task::DoorOpening, Task::DrawerOpening, Task::Drinking,
    Task::Feeding};

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view name);

}  // namespace sessionforge

#endif  // SESSIONFORGE_TASK_HPP_
