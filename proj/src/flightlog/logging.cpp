#include "aeolus/flightlog/logging.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace aeolus::flightlog {

namespace {

LogLevel parse_threshold() {
    const char* env = std::getenv("AEOLUS_LOG_LEVEL");
    if (!env)
        return LogLevel::Info;
    std::string v(env);
    for (char& c : v)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (v == "error")
        return LogLevel::Error;
    if (v == "warn" || v == "warning")
        return LogLevel::Warn;
    if (v == "debug")
        return LogLevel::Debug;
    return LogLevel::Info;
}

const char* level_tag(LogLevel l) {
    switch (l) {
    case LogLevel::Error: return "error";
    case LogLevel::Warn: return "warn";
    case LogLevel::Info: return "info";
    case LogLevel::Debug: return "debug";
    }
    return "info";
}

} // namespace

LogLevel log_threshold() {
    static const LogLevel threshold = parse_threshold();
    return threshold;
}

void log(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_threshold()))
        return;
    std::fprintf(stderr, "[%s] %s\n", level_tag(level), message.c_str());
}

} // namespace aeolus::flightlog
