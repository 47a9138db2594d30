#pragma once

#include <string>

namespace aeolus::flightlog {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold parsed once from AEOLUS_LOG_LEVEL (error|warn|info|debug,
/// case-insensitive); unset or unrecognized falls back to Info.
LogLevel log_threshold();

/// Write "[level] message" to stderr when the level passes the threshold.
/// Diagnostics stay off stdout so command output remains machine-parseable.
void log(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log(LogLevel::Error, m); }
inline void log_warn(const std::string& m) { log(LogLevel::Warn, m); }
inline void log_info(const std::string& m) { log(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log(LogLevel::Debug, m); }

} // namespace aeolus::flightlog
