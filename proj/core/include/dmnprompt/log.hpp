#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace dmnprompt::log {

enum class Level { debug = 0, info = 1, warning = 2, error = 3, off = 4 };

std::string_view to_string(Level level) noexcept;

using Sink = std::function<void(Level, std::string_view)>;

/// Messages below the threshold are dropped. Default: warning.
void set_level(Level level) noexcept;
Level level() noexcept;

/// Replaces the output sink (default writes "level: message" to stderr).
/// Passing an empty function restores the default. Returns the previous sink.
Sink set_sink(Sink sink);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warning(std::string_view m) { write(Level::warning, m); }
inline void error(std::string_view m) { write(Level::error, m); }

}  // namespace dmnprompt::log
