#include "dmnprompt/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace dmnprompt::log {

namespace {

std::atomic<Level> g_level{Level::warning};
std::mutex g_mutex;

void default_sink(Level level, std::string_view message) {
  std::cerr << to_string(level) << ": " << message << '\n';
}

Sink& current_sink() {
  static Sink sink = default_sink;
  return sink;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warning: return "warning";
    case Level::error: return "error";
    case Level::off: return "off";
  }
  return "?";
}

void set_level(Level level) noexcept { g_level.store(level); }

Level level() noexcept { return g_level.load(); }

Sink set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  Sink previous = std::move(current_sink());
  current_sink() = sink ? std::move(sink) : Sink(default_sink);
  return previous;
}

void write(Level lvl, std::string_view message) {
  if (lvl < g_level.load() || lvl == Level::off) return;
  std::lock_guard lock(g_mutex);
  current_sink()(lvl, message);
}

}  // namespace dmnprompt::log
