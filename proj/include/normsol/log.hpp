#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace normsol::log {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

// Verbosity comes from NORMSOL_LOG (quiet|warn|info|debug). Default: warn.
inline Level level() {
  static Level lv = [] {
    const char* e = std::getenv("NORMSOL_LOG");
    if (!e) return Level::warn;
    if (!std::strcmp(e, "quiet")) return Level::quiet;
    if (!std::strcmp(e, "info")) return Level::info;
    if (!std::strcmp(e, "debug")) return Level::debug;
    return Level::warn;
  }();
  return lv;
}

inline void emit(Level lv, const char* tag, const char* fmt, va_list ap) {
  if (static_cast<int>(lv) > static_cast<int>(level())) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::vfprintf(stderr, fmt, ap);
  std::fputc('\n', stderr);
}

inline void warn(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  emit(Level::warn, "warn", fmt, ap);
  va_end(ap);
}

inline void info(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  emit(Level::info, "info", fmt, ap);
  va_end(ap);
}

inline void debug(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  emit(Level::debug, "debug", fmt, ap);
  va_end(ap);
}

}  // namespace normsol::log
