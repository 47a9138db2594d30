#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

namespace aeolus::est {

/// Recovers the body-frame air velocity of the vehicle center from the
/// 3-vector flow measured at the anemometer center:
///   v_body = R0 * flow_sensor - omega x delta
/// where R0 maps sensor to body, delta is the sensor offset from the center
/// of mass (body frame, m), and omega is the body angular rate (rad/s).
core::Vec3 lever_arm_velocity(const core::Vec3& flow_sensor,
                              const core::Vec3& omega,
                              const core::Rotation& r0,
                              const core::Vec3& delta);

/// Forward model of the same geometry: the sensor-frame flow produced at the
/// anemometer center by a body air velocity and angular rate. Exact inverse
/// of lever_arm_velocity.
core::Vec3 sensor_frame_flow(const core::Vec3& v_air_body,
                             const core::Vec3& omega,
                             const core::Rotation& r0,
                             const core::Vec3& delta);

} // namespace aeolus::est
