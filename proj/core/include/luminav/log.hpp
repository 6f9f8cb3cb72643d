#pragma once

#include <string>

namespace luminav {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

void set_log_level(LogLevel level);
LogLevel log_level();

void log_info(const std::string& msg);
void log_warn(const std::string& msg);
void log_error(const std::string& msg);

/// Emits a warning only the first time `key` is seen in this process.
/// Used by hot paths where the same condition can recur thousands of times.
void log_warn_once(const std::string& key, const std::string& msg);

}  // namespace luminav
