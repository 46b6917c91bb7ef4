#pragma once

#include <string_view>

namespace robust_lrt {

enum class log_level { quiet = 0, error = 1, warn = 2, info = 3, debug = 4 };

// Threshold from ROBUST_LRT_LOG (a name such as "info" or a digit 0-4);
// defaults to warn. Read once.
log_level current_log_level();
void set_log_level(log_level level);

// Writes "[level] message" to stderr when level is enabled.
void log_message(log_level level, std::string_view message);

} // namespace robust_lrt
