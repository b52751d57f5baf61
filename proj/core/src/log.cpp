#include "impactres/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace impactres::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("IMPACTRES_LOG");
    if (env == nullptr) return Level::Warn;
    if (std::strcmp(env, "error") == 0) return Level::Error;
    if (std::strcmp(env, "warn") == 0) return Level::Warn;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    return Level::Warn;
}

const char* tag(Level lvl) {
    switch (lvl) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

}  // namespace

Level level() {
    static const Level lvl = parse_level();
    return lvl;
}

void message(Level lvl, const std::string& text) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    std::fprintf(stderr, "[impactres %s] %s\n", tag(lvl), text.c_str());
}

}  // namespace impactres::log
