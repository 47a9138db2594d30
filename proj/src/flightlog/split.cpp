#include "aeolus/flightlog/split.hpp"

#include "aeolus/core/errors.hpp"

#include <algorithm>

namespace aeolus::flightlog {

SessionSplit split_sessions(std::vector<std::string> sessions) {
    std::sort(sessions.begin(), sessions.end());
    const std::size_t n = sessions.size();
    if (n < 2)
        throw core::ConfigError(
            "need at least 2 sessions to form a train/validation split, got " +
            std::to_string(n));

    SessionSplit out;
    const std::size_t n_train = (n >= 4) ? n - 2 : 1;
    const std::size_t n_val = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < n_train)
            out.train.push_back(std::move(sessions[i]));
        else if (i < n_train + n_val)
            out.validation.push_back(std::move(sessions[i]));
        else
            out.test.push_back(std::move(sessions[i]));
    }
    return out;
}

} // namespace aeolus::flightlog
