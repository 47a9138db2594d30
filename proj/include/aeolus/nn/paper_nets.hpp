#pragma once

#include "aeolus/est/attitude.hpp"
#include "aeolus/fusion/pipeline.hpp"
#include "aeolus/nn/network.hpp"
#include "aeolus/nn/windows.hpp"
#include "aeolus/sim/record.hpp"

#include <optional>
#include <vector>

namespace aeolus::nn {

/// The three learned estimators.
///   velocity:     4 anemometer + 3 gyro channels, 1.0 s windows ->
///                 body-frame air velocity (two conv + two GRU + dense).
///   acceleration: 4 anemometer + 4 ESC + 4 attitude-quaternion + voltage +
///                 current, 0.5 s windows -> inertial acceleration.
///   status:       8 summary channels, 0.5 s windows -> softmax over
///                 {on-ground, in-air}.
NetworkSpec velocity_network_spec();
NetworkSpec acceleration_network_spec();
NetworkSpec status_network_spec();

/// Per-row attitude estimates from an IMU/magnetometer-only observer pass
/// (zero acceleration reference), initialized from the first rest window
/// exactly like the odometry loop. Supplies the acceleration network's
/// attitude channels at training time; at inference the live fused attitude
/// takes their place.
std::vector<core::Quat> attitude_pass(const sim::FlightRecord& rec,
                                      const est::AttitudeGains& gains,
                                      const core::Vec3& mag_field,
                                      double init_window_s = 1.0);

/// Channel matrices on the base grid, sparse sensors forward-filled.
/// with_targets requires ground-truth columns on every row (DataError
/// otherwise): velocity targets are the body-frame truth velocity, the
/// acceleration target is the inertial truth acceleration, and the status
/// target is the one-hot truth phase.
SessionChannels velocity_channels(const sim::FlightRecord& rec,
                                  bool with_targets);
SessionChannels acceleration_channels(const sim::FlightRecord& rec,
                                      const std::vector<core::Quat>& attitude,
                                      bool with_targets);
SessionChannels status_channels(const sim::FlightRecord& rec,
                                bool with_targets);

/// Measurement provider backed by the trained networks. Inference runs on a
/// fixed tick stride (holding the last output in between) starting at the
/// first complete window; before that every query returns nullopt. Networks
/// whose weights are absent simply never produce output, which the fusion
/// loop treats as a missing sample.
class NetworkInference final : public fusion::MeasurementProvider {
public:
    NetworkInference(const sim::FlightRecord& rec,
                     std::optional<Weights> velocity,
                     std::optional<Weights> acceleration,
                     std::optional<Weights> status, std::size_t stride = 8);

    void observe(std::size_t tick, const core::Quat& attitude) override;
    std::optional<core::Vec3> air_velocity_body(std::size_t tick) override;
    std::optional<core::Vec3> accel_inertial(std::size_t tick) override;
    std::optional<double> in_air_probability(std::size_t tick) override;

private:
    std::size_t stride_;
    NetworkSpec vel_spec_, acc_spec_, status_spec_;
    std::optional<Weights> vel_w_, acc_w_, status_w_;
    SessionChannels vel_ch_, acc_ch_, status_ch_;
    std::vector<core::Quat> quats_;

    struct Held {
        std::optional<core::Vec3> vec;
        double scalar = 0.0;
        bool has_scalar = false;
        std::size_t eval_tick = static_cast<std::size_t>(-1);
    };
    Held vel_held_, acc_held_, status_held_;

    bool due(std::size_t tick, std::size_t window_len, const Held& h) const;
    Tensor window_at(const SessionChannels& ch, std::size_t tick,
                     std::size_t window_len) const;
};

} // namespace aeolus::nn
