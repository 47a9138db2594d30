#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <cstddef>
#include <deque>

namespace aeolus::est {

struct AttitudeGains {
    double bias_gain = 0.5;   ///< gyro-bias integration gain
    double accel_gain = 2.0;  ///< gravity-direction correction gain
    double mag_gain = 2.0;    ///< magnetic-direction correction gain
    std::size_t mean_window = 20; ///< boxcar length for accel/mag prefilter

    void validate() const;
};

struct AttitudeState {
    core::Rotation rot;    ///< body -> inertial estimate
    core::Vec3 gyro_bias;  ///< rad/s
};

struct ImuSample {
    core::Vec3 accel; ///< m/s^2, specific force in body frame
    core::Vec3 gyro;  ///< rad/s
    core::Vec3 mag;   ///< unit-field, body frame
};

/// Complementary attitude observer: integrates de-biased gyro rates and
/// steers toward the gravity direction (acceleration-compensated through the
/// fused acceleration estimate) and the magnetic field direction. Gravity and
/// field references are fixed inertial vectors.
class AttitudeObserver {
public:
    AttitudeObserver() = default;
    AttitudeObserver(const AttitudeGains& gains, const core::Vec3& mag_field);

    /// Set R̂ from accelerometer/magnetometer means taken at rest: tilt from
    /// the gravity direction, heading from the horizontal field component.
    void initialize_from_rest(const core::Vec3& accel_mean,
                              const core::Vec3& mag_mean);

    /// One observer step. v_dot_est is the estimated inertial acceleration
    /// (from the fusion stage; zero during startup).
    void step(const ImuSample& imu, const core::Vec3& v_dot_est, double dt);

    const AttitudeState& state() const { return state_; }
    AttitudeState& state() { return state_; }

    /// Correction vector of the last step (diagnostics, zero before any step).
    const core::Vec3& last_correction() const { return gamma_; }

private:
    core::Vec3 filtered(std::deque<core::Vec3>& buf, const core::Vec3& sample);

    AttitudeGains gains_;
    core::Vec3 mag_field_{0.5, 0.0, 0.8660254037844386};
    AttitudeState state_;
    core::Vec3 gamma_;
    std::deque<core::Vec3> accel_buf_, mag_buf_;
};

} // namespace aeolus::est
