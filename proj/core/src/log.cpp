#include "luminav/log.hpp"

#include <iostream>
#include <mutex>
#include <unordered_set>

namespace luminav {

namespace {
LogLevel g_level = LogLevel::warn;
std::mutex g_mutex;
std::unordered_set<std::string> g_seen_keys;

void emit(LogLevel level, const char* tag, const std::string& msg) {
  if (level < g_level) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[" << tag << "] " << msg << "\n";
}
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void log_info(const std::string& msg) { emit(LogLevel::info, "info", msg); }
void log_warn(const std::string& msg) { emit(LogLevel::warn, "warn", msg); }
void log_error(const std::string& msg) { emit(LogLevel::error, "error", msg); }

void log_warn_once(const std::string& key, const std::string& msg) {
  if (LogLevel::warn < g_level) return;
  {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (!g_seen_keys.insert(key).second) return;
    std::cerr << "[warn] " << msg << "\n";
  }
}

}  // namespace luminav
