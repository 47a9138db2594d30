#pragma once

#include <string>
#include <vector>

namespace aeolus::flightlog {

/// Whole-session partition; windows never straddle a split boundary because
/// windowing operates per session downstream.
struct SessionSplit {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
};

/// Deterministic split of session identifiers (sorted lexicographically
/// first): N >= 4 -> N-2/1/1, 3 -> 1/1/1, 2 -> 1/1/0 (no held-out test).
/// Fewer than 2 sessions cannot be split and raises core::ConfigError.
SessionSplit split_sessions(std::vector<std::string> sessions);

} // namespace aeolus::flightlog
