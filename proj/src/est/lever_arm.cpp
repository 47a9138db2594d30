#include "aeolus/est/lever_arm.hpp"

namespace aeolus::est {

core::Vec3 lever_arm_velocity(const core::Vec3& flow_sensor,
                              const core::Vec3& omega,
                              const core::Rotation& r0,
                              const core::Vec3& delta) {
    return r0 * flow_sensor - omega.cross(delta);
}

core::Vec3 sensor_frame_flow(const core::Vec3& v_air_body,
                             const core::Vec3& omega,
                             const core::Rotation& r0,
                             const core::Vec3& delta) {
    return r0.rotate_back(v_air_body + omega.cross(delta));
}

} // namespace aeolus::est
