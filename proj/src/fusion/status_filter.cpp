#include "aeolus/fusion/status_filter.hpp"

namespace aeolus::fusion {

Status StatusFilter::feed(double p_in_air, double dt) {
    const bool arming = status_ == Status::OnGround
                            ? p_in_air > cfg_.up_threshold
                            : p_in_air < cfg_.down_threshold;
    if (!arming) {
        streak_s_ = 0.0;
        return status_;
    }
    streak_s_ += dt;
    if (streak_s_ >= cfg_.dwell_s) {
        status_ = status_ == Status::OnGround ? Status::InAir : Status::OnGround;
        streak_s_ = 0.0;
    }
    return status_;
}

} // namespace aeolus::fusion
