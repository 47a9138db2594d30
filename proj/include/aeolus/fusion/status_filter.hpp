#pragma once

#include "aeolus/fusion/observer.hpp"

namespace aeolus::fusion {

/// Debounces the raw in-air probability stream into a chatter-free status
/// signal: a switch requires the probability to stay beyond the threshold
/// for a minimum dwell time.
class StatusFilter {
public:
    struct Config {
        double up_threshold = 0.8;   ///< P(InAir) above this arms takeoff
        double down_threshold = 0.2; ///< P(InAir) below this arms landing
        double dwell_s = 0.1;        ///< required persistence
        Status initial = Status::OnGround;
    };

    StatusFilter() = default;
    explicit StatusFilter(const Config& cfg) : cfg_(cfg), status_(cfg.initial) {}

    /// Feed one probability sample; returns the debounced status.
    Status feed(double p_in_air, double dt);

    Status status() const { return status_; }

private:
    Config cfg_;
    Status status_ = Status::OnGround;
    double streak_s_ = 0.0;
};

} // namespace aeolus::fusion
