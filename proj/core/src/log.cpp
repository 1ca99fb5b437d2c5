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

#include "flatpush/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string_view>

namespace flatpush {

namespace {

LogLevel parse(const char* env) {
  if (env == nullptr) return LogLevel::kWarn;
  const std::string_view s(env);
  if (s == "quiet" || s == "0") return LogLevel::kQuiet;
  if (s == "warn" || s == "1") return LogLevel::kWarn;
  if (s == "info" || s == "2") return LogLevel::kInfo;
  if (s == "debug" || s == "3") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

std::atomic<int>& level_store() {
  static std::atomic<int> level{
      static_cast<int>(parse(std::getenv("FLATPUSH_LOG")))};
  return level;
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_store().load()); }

void set_log_level(LogLevel level) {
  level_store().store(static_cast<int>(level));
}

void log_message(LogLevel level, const std::string& message) {
  if (level == LogLevel::kQuiet || level > log_level()) return;
  static constexpr const char* kTags[] = {"", "warn", "info", "debug"};
  std::cerr << "[flatpush " << kTags[static_cast<int>(level)] << "] "
            << message << '\n';
}

}  // namespace flatpush
