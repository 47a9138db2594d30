#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <array>

namespace aeolus::sim {

/// Geometry and noise model of the sensor head: a four-channel thermal
/// anemometer array rigidly mounted away from the IMU, plus the IMU,
/// magnetometer, barometer, ESC telemetry and battery monitor.
///
/// Channel layout: channels 0 and 1 sense along body x and y; channels 2 and
/// 3 both sense along body -z (mounted as an opposed vertical pair so rotor
/// downwash couples into them with opposite polarity).
struct SensorRig {
    core::Rotation mount;              ///< sensor-frame -> body-frame
    core::Vec3 lever_arm{0.10, 0.0, -0.05}; ///< IMU -> sensor head, body frame [m]

    std::array<core::Vec3, 4> axes{
        core::Vec3::unit_x(), core::Vec3::unit_y(),
        core::Vec3{0.0, 0.0, -1.0}, core::Vec3{0.0, 0.0, -1.0}};

    /// Downwash pickup per channel: reading gains c_i * v_induced * gef.
    /// The vertical pair sits in the wake; the opposed mounting makes the
    /// two couplings differ, which is what lets a model separate climb rate
    /// from downwash.
    std::array<double, 4> downwash_coupling{0.05, 0.05, -1.0, -0.65};

    // Measurement noise (one standard deviation).
    double anemo_noise = 0.05;        ///< m/s
    double accel_noise = 0.05;        ///< m/s^2
    double gyro_noise = 0.002;        ///< rad/s
    double mag_noise = 0.005;         ///< unit-field
    double baro_noise_pa = 3.0;       ///< Pa
    double esc_noise = 0.005;         ///< normalized command
    double voltage_noise = 0.02;      ///< V
    double current_noise = 0.05;      ///< A

    /// Optional speed-proportional inflation of anemometer noise:
    /// sigma_eff = anemo_noise * (1 + anemo_noise_speed_gain * |flow|).
    double anemo_noise_speed_gain = 0.0;

    // Sensor biases.
    core::Vec3 accel_bias{0.05, -0.03, 0.08};   ///< m/s^2
    core::Vec3 gyro_bias{0.004, -0.003, 0.002}; ///< rad/s
    double baro_alt_bias_m = 0.2;               ///< m, altitude-equivalent
    double baro_alt_drift_mps = 0.01;           ///< m/s, slow bias ramp

    /// Normalized local magnetic field in the inertial frame.
    core::Vec3 mag_field{0.5, 0.0, 0.8660254037844386};

    // Battery model: voltage sags and current rises with normalized rotor load.
    double battery_voltage_full = 16.8; ///< V
    double battery_voltage_sag = 2.0;   ///< V at full load
    double battery_current_idle = 0.3;  ///< A
    double battery_current_gain = 30.0; ///< A at full load

    void validate() const;
};

/// Combine the four channel readings into the sensor-frame flow 3-vector:
/// x and y from the horizontal channels, z from the mean of the vertical
/// pair after aligning their signs. Inverse of projecting a flow vector
/// onto the channel axes (exact when readings are noise- and downwash-free).
core::Vec3 assemble_flow_vector(const std::array<double, 4>& readings,
                                const SensorRig& rig);

} // namespace aeolus::sim
