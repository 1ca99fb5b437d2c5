// Copyright 2026 The flatpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>

namespace flatpush {

// Levels: 0 quiet, 1 warn, 2 info, 3 debug. Read once from FLATPUSH_LOG
// ("quiet", "warn", "info", "debug" or a digit); default warn.
enum class LogLevel { kQuiet = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string& message);

inline void log_warn(const std::string& m) { log_message(LogLevel::kWarn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::kInfo, m); }

// Lazy variant; the message is only built when debug output is enabled.
inline void log_debug(const std::function<std::string()>& make) {
  if (log_level() >= LogLevel::kDebug) log_message(LogLevel::kDebug, make());
}

}  // namespace flatpush
