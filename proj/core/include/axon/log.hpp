#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace axon {

enum class LogLevel { info, warning };

/// Diagnostics sink. Defaults to stderr; tests and the CLI may redirect it.
using LogSink = std::function<void(LogLevel, std::string_view)>;

void set_log_sink(LogSink sink);
void log_message(LogLevel level, std::string_view msg);
inline void log_warning(std::string_view msg) { log_message(LogLevel::warning, msg); }
inline void log_info(std::string_view msg) { log_message(LogLevel::info, msg); }

}  // namespace axon
