#include "robust_lrt/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>

namespace robust_lrt {

namespace {

log_level parse_level(const char* text) {
    if (!text) return log_level::warn;
    const std::string s(text);
    if (s == "quiet" || s == "0") return log_level::quiet;
    if (s == "error" || s == "1") return log_level::error;
    if (s == "warn" || s == "2") return log_level::warn;
    if (s == "info" || s == "3") return log_level::info;
    if (s == "debug" || s == "4") return log_level::debug;
    return log_level::warn;
}

std::atomic<int>& level_storage() {
    static std::atomic<int> level{static_cast<int>(parse_level(std::getenv("ROBUST_LRT_LOG")))};
    return level;
}

const char* label(log_level level) {
    switch (level) {
    case log_level::error: return "error";
    case log_level::warn: return "warn";
    case log_level::info: return "info";
    case log_level::debug: return "debug";
    default: return "";
    }
}

} // namespace

log_level current_log_level() {
    return static_cast<log_level>(level_storage().load());
}

void set_log_level(log_level level) {
    level_storage().store(static_cast<int>(level));
}

void log_message(log_level level, std::string_view message) {
    if (level == log_level::quiet || static_cast<int>(level) > level_storage().load()) return;
    std::cerr << "[" << label(level) << "] " << message << '\n';
}

} // namespace robust_lrt
