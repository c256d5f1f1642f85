#include "axon/log.hpp"

#include <cstdio>
#include <mutex>

namespace axon {

namespace {

std::mutex sink_mutex;
LogSink& sink() {
  static LogSink s = [](LogLevel level, std::string_view msg) {
    std::fprintf(stderr, "%s%.*s\n", level == LogLevel::warning ? "warning: " : "", static_cast<int>(msg.size()),
                 msg.data());
  };
  return s;
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex);
  sink() = s ? std::move(s) : [](LogLevel, std::string_view) {};
}

void log_message(LogLevel level, std::string_view msg) {
  std::lock_guard lock(sink_mutex);
  sink()(level, msg);
}

}  // namespace axon
