#pragma once

#include <string>

namespace impactres::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Active level, read once from IMPACTRES_LOG in {error,warn,info,debug}
/// (default warn). Unrecognized values fall back to warn.
Level level();

void message(Level lvl, const std::string& text);

inline void error(const std::string& text) { message(Level::Error, text); }
inline void warn(const std::string& text) { message(Level::Warn, text); }
inline void info(const std::string& text) { message(Level::Info, text); }
inline void debug(const std::string& text) { message(Level::Debug, text); }

}  // namespace impactres::log
